#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nn/losses.hpp"
#include "nn/ops.hpp"
#include "support/oracles.hpp"

using namespace pulsekit;
using namespace pulsekit::nn;
using pulsekit::testing::check_gradients;
using pulsekit::testing::projection_loss;

namespace {

Tensor random_tensor(std::vector<int64_t> shape, Rng& rng, bool requires_grad = true,
                     double scale = 1.0) {
    std::vector<double> v(static_cast<std::size_t>(shape_numel(shape)));
    for (auto& x : v) x = scale * rng.uniform(-1.0, 1.0);
    return Tensor::from_values(std::move(shape), std::move(v), requires_grad);
}

} // namespace

TEST_CASE("conv3d with a delta kernel is the identity") {
    Rng rng(1);
    Tensor x = random_tensor({2, 4, 5, 5}, rng, false);
    // w[co][ci][1][1][1] = identity over channels
    Tensor w = Tensor::zeros({2, 2, 1, 1, 1});
    w.values()[0] = 1.0; // w[0][0]
    w.values()[3] = 1.0; // w[1][1]
    Tensor out = conv3d(x, w, Tensor());
    REQUIRE(out.shape() == x.shape());
    for (std::size_t i = 0; i < out.values().size(); ++i)
        CHECK(out.values()[i] == doctest::Approx(x.values()[i]).epsilon(1e-12));

    // Centered 3x3x3 delta also reproduces the input.
    Tensor w3 = Tensor::zeros({2, 2, 3, 3, 3});
    auto at = [&](int co, int ci, int t, int y, int x_) {
        return static_cast<std::size_t>((((co * 2 + ci) * 3 + t) * 3 + y) * 3 + x_);
    };
    w3.values()[at(0, 0, 1, 1, 1)] = 1.0;
    w3.values()[at(1, 1, 1, 1, 1)] = 1.0;
    Tensor out3 = conv3d(x, w3, Tensor());
    for (std::size_t i = 0; i < out3.values().size(); ++i)
        CHECK(out3.values()[i] == doctest::Approx(x.values()[i]).epsilon(1e-12));
}

TEST_CASE("relu backward is zero at negative inputs") {
    Tensor x = Tensor::from_values({4}, {-2.0, -0.5, 0.5, 2.0}, true);
    Tensor out = relu(x);
    Rng rng(2);
    projection_loss(out, rng).backward();
    const auto& g = *x.grad_if_any();
    CHECK(g[0] == 0.0);
    CHECK(g[1] == 0.0);
    CHECK(g[2] != 0.0);
    CHECK(g[3] != 0.0);
}

TEST_CASE("finite-difference gradients: every op, 25 seeds") {
    double worst = 0.0;
    for (uint64_t seed = 1; seed <= 25; ++seed) {
        Rng rng(seed);

        { // conv3d: x, w, b all differentiable
            Tensor x = random_tensor({2, 4, 5, 4}, rng);
            Tensor w = random_tensor({3, 2, 3, 3, 3}, rng, true, 0.5);
            Tensor b = random_tensor({3}, rng);
            Rng proj(seed * 31);
            auto fwd = [&]() {
                Rng p2 = proj;
                return projection_loss(conv3d(x, w, b), p2);
            };
            auto rep = check_gradients({x, w, b}, fwd);
            worst = std::max(worst, rep.max_rel_err);
        }
        { // relu (inputs kept away from the kink)
            Tensor x = random_tensor({24}, rng);
            for (auto& v : x.values())
                if (std::abs(v) < 5e-4) v = 0.1;
            Rng proj(seed * 37);
            auto fwd = [&]() {
                Rng p2 = proj;
                return projection_loss(relu(x), p2);
            };
            worst = std::max(worst, check_gradients({x}, fwd).max_rel_err);
        }
        { // avgpool3d
            Tensor x = random_tensor({2, 4, 4, 4}, rng);
            Rng proj(seed * 41);
            auto fwd = [&]() {
                Rng p2 = proj;
                return projection_loss(avgpool3d(x, 2, 2, 2), p2);
            };
            worst = std::max(worst, check_gradients({x}, fwd).max_rel_err);
        }
        { // upsample_temporal
            Tensor x = random_tensor({2, 3, 3, 3}, rng);
            Rng proj(seed * 43);
            auto fwd = [&]() {
                Rng p2 = proj;
                return projection_loss(upsample_temporal(x, 2), p2);
            };
            worst = std::max(worst, check_gradients({x}, fwd).max_rel_err);
        }
        { // dense
            Tensor x = random_tensor({6}, rng);
            Tensor w = random_tensor({4, 6}, rng);
            Tensor b = random_tensor({4}, rng);
            Rng proj(seed * 47);
            auto fwd = [&]() {
                Rng p2 = proj;
                return projection_loss(dense(x, w, b), p2);
            };
            worst = std::max(worst, check_gradients({x, w, b}, fwd).max_rel_err);
        }
        { // spatial_mean + global_mean + reshape chained
            Tensor x = random_tensor({3, 2, 4, 4}, rng);
            Rng proj(seed * 53);
            auto fwd = [&]() {
                Rng p2 = proj;
                return projection_loss(reshape(spatial_mean(x), {6}), p2);
            };
            worst = std::max(worst, check_gradients({x}, fwd).max_rel_err);
            Rng proj2(seed * 59);
            auto fwd2 = [&]() {
                Rng p2 = proj2;
                return projection_loss(global_mean(x), p2);
            };
            worst = std::max(worst, check_gradients({x}, fwd2).max_rel_err);
        }
        { // feature_norm
            Tensor x = random_tensor({9}, rng);
            Rng proj(seed * 61);
            auto fwd = [&]() {
                Rng p2 = proj;
                return projection_loss(feature_norm(x), p2);
            };
            worst = std::max(worst, check_gradients({x}, fwd).max_rel_err);
        }
        { // pearson loss
            Tensor pred = random_tensor({12}, rng);
            Tensor gt = random_tensor({12}, rng, false);
            auto fwd = [&]() { return pearson_loss(pred, gt); };
            worst = std::max(worst, check_gradients({pred}, fwd).max_rel_err);
        }
        { // weighted RMSE
            Tensor pred = random_tensor({10}, rng);
            Tensor gt = random_tensor({10}, rng, false);
            std::vector<double> wts(10);
            double mean = 0.0;
            for (auto& v : wts) {
                v = rng.uniform(0.1, 2.0);
                mean += v;
            }
            for (auto& v : wts) v *= 10.0 / mean;
            auto fwd = [&]() { return weighted_rmse(pred, gt, wts); };
            worst = std::max(worst, check_gradients({pred}, fwd).max_rel_err);
        }
    }
    CHECK(worst < 1e-4);
}

TEST_CASE("gradient flow stops at non-differentiable leaves") {
    Rng rng(5);
    Tensor x = random_tensor({2, 4, 4, 4}, rng, false); // constant input
    Tensor w = random_tensor({2, 2, 3, 3, 3}, rng, true, 0.5);
    Tensor out = conv3d(x, w, Tensor());
    Rng proj(6);
    projection_loss(out, proj).backward();
    CHECK(w.grad_if_any() != nullptr);
    CHECK(x.grad_if_any() == nullptr);

    // Freezing w as well prunes the whole graph.
    Tensor wf = random_tensor({2, 2, 3, 3, 3}, rng, false);
    Tensor out2 = conv3d(x, wf, Tensor());
    CHECK_FALSE(out2.needs_grad());
}

TEST_CASE("ops reject shape mismatches with both shapes named") {
    Rng rng(7);
    Tensor x = random_tensor({2, 4, 4, 4}, rng);
    Tensor w = random_tensor({3, 5, 3, 3, 3}, rng); // wrong Cin
    CHECK_THROWS_WITH_AS(conv3d(x, w, Tensor()), doctest::Contains("[2, 4, 4, 4]"),
                         UsageError);
    Tensor d = random_tensor({4}, rng);
    Tensor dw = random_tensor({3, 5}, rng);
    CHECK_THROWS_AS(dense(d, dw, Tensor()), UsageError);
    CHECK_THROWS_AS(avgpool3d(x, 3, 2, 2), UsageError);
}

TEST_CASE("NaN guard fires on non-finite results") {
    Tensor x = Tensor::from_values({2}, {1e308, 1e308}, false);
    Tensor w = Tensor::from_values({1, 2}, {1e308, 1e308}, true);
    CHECK_THROWS_AS(dense(x, w, Tensor()), NumericError);
}

TEST_CASE("repeated use of a tensor accumulates both gradient paths") {
    Tensor x = Tensor::from_values({3}, {0.3, -0.7, 1.1}, true);
    // loss = proj(relu(x)) + proj(x) through a shared parent
    Rng proj(11);
    Tensor a = relu(x);
    Tensor loss = projection_loss(a, proj);
    auto fwd = [&]() {
        Rng p2(11);
        return projection_loss(relu(x), p2);
    };
    auto rep = check_gradients({x}, fwd);
    CHECK(rep.max_rel_err < 1e-6);
}
