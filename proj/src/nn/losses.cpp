#include "nn/losses.hpp"

#include <cmath>

namespace pulsekit::nn {

Tensor pearson_loss(const Tensor& pred, const Tensor& gt) {
    if (pred.shape() != gt.shape() || pred.shape().size() != 1 || pred.numel() < 2)
        throw UsageError("pearson_loss: need equal 1-D tensors of length >= 2, got " +
                         pred.shape_str() + " vs " + gt.shape_str());
    const auto& p = pred.values();
    const auto& g = gt.values();
    const std::size_t n = p.size();

    double pm = 0.0, gm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        pm += p[i];
        gm += g[i];
    }
    pm /= static_cast<double>(n);
    gm /= static_cast<double>(n);

    double num = 0.0, sp = 0.0, sg = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double dp = p[i] - pm, dg = g[i] - gm;
        num += dp * dg;
        sp += dp * dp;
        sg += dg * dg;
    }
    const double denom = std::sqrt(sp) * std::sqrt(sg) + kLossEpsilon;
    const double loss = 1.0 - num / denom;
    check_finite({loss}, "pearson_loss");

    return Tensor::make_node(
        {1}, {loss}, {pred, gt},
        [pred, gt, pm, gm, num, sp, sg, denom](Tensor& self) mutable {
            if (!pred.needs_grad()) return;
            const double dy = (*self.grad_if_any())[0];
            const auto& p = pred.values();
            const auto& g = gt.values();
            auto& dp = pred.grad();
            const double sqrt_sp = std::sqrt(sp), sqrt_sg = std::sqrt(sg);
            for (std::size_t i = 0; i < p.size(); ++i) {
                double cp = p[i] - pm, cg = g[i] - gm;
                // d denom / d p_i = sqrt_sg * cp / sqrt_sp
                double ddenom = sqrt_sp > 0.0 ? sqrt_sg * cp / sqrt_sp : 0.0;
                double dr = (cg * denom - num * ddenom) / (denom * denom);
                dp[i] += dy * (-dr);
            }
        });
}

Tensor weighted_rmse(const Tensor& pred, const Tensor& gt,
                     const std::vector<double>& weights) {
    if (pred.shape() != gt.shape() || pred.shape().size() != 1)
        throw UsageError("weighted_rmse: need equal 1-D tensors, got " + pred.shape_str() +
                         " vs " + gt.shape_str());
    if (weights.size() != pred.values().size())
        throw UsageError("weighted_rmse: weight count mismatch");

    double wsum = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw UsageError("weighted_rmse: weights must be non-negative");
        wsum += w;
    }
    if (wsum == 0.0) throw NumericError("weighted_rmse: degenerate batch, all weights zero");

    const auto& p = pred.values();
    const auto& g = gt.values();
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        double e = p[i] - g[i];
        acc += weights[i] * e * e;
    }
    const double denom = wsum + kLossEpsilon;
    const double loss = std::sqrt(acc / denom);
    check_finite({loss}, "weighted_rmse");

    return Tensor::make_node(
        {1}, {loss}, {pred, gt}, [pred, gt, weights, denom, loss](Tensor& self) mutable {
            if (!pred.needs_grad()) return;
            const double dy = (*self.grad_if_any())[0];
            if (loss <= 0.0) return; // flat minimum; subgradient zero
            const auto& p = pred.values();
            const auto& g = gt.values();
            auto& dp = pred.grad();
            for (std::size_t i = 0; i < p.size(); ++i)
                dp[i] += dy * weights[i] * (p[i] - g[i]) / (loss * denom);
        });
}

} // namespace pulsekit::nn
