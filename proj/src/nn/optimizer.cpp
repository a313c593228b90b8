#include "nn/optimizer.hpp"

#include <cmath>
#include <numbers>

namespace pulsekit::nn {

double OneCycleSchedule::lr_at(std::size_t step) const {
    if (!enabled_) return peak_;
    const double warm_frac = 0.3;
    const double start = peak_ / 25.0;
    const double floor_lr = peak_ / 100.0;
    const auto warm_steps = static_cast<double>(total_) * warm_frac;
    const auto s = static_cast<double>(step);
    if (s < warm_steps) return start + (peak_ - start) * (s / warm_steps);
    double u = (s - warm_steps) / (static_cast<double>(total_) - warm_steps);
    u = std::min(1.0, std::max(0.0, u));
    return floor_lr + (peak_ - floor_lr) * 0.5 * (1.0 + std::cos(std::numbers::pi * u));
}

SgdOptimizer::SgdOptimizer(std::vector<NamedParam>& params, double momentum)
    : params_(&params), momentum_(momentum) {
    velocity_.resize(params.size());
    for (std::size_t i = 0; i < params.size(); ++i)
        velocity_[i].assign(params[i].tensor.values().size(), 0.0);
}

void SgdOptimizer::step(double lr) {
    for (std::size_t i = 0; i < params_->size(); ++i) {
        auto& p = (*params_)[i].tensor;
        if (!p.requires_grad()) continue;
        const auto* g = p.grad_if_any();
        if (!g) continue;
        auto& v = velocity_[i];
        auto& vals = p.values();
        for (std::size_t k = 0; k < vals.size(); ++k) {
            v[k] = momentum_ * v[k] + (*g)[k];
            vals[k] -= lr * v[k];
        }
    }
}

void SgdOptimizer::zero_grad() {
    for (auto& p : *params_) p.tensor.zero_grad();
}

void SgdOptimizer::clip_grad_norm(double max_norm) {
    if (max_norm <= 0.0) return;
    double total = 0.0;
    for (auto& p : *params_) {
        const auto* g = p.tensor.grad_if_any();
        if (!g) continue;
        for (double v : *g) total += v * v;
    }
    total = std::sqrt(total);
    if (total <= max_norm) return;
    const double scale = max_norm / total;
    for (auto& p : *params_) {
        if (!p.tensor.grad_if_any()) continue;
        for (double& v : p.tensor.grad()) v *= scale;
    }
}

} // namespace pulsekit::nn
