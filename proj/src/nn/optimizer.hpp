#pragma once

#include <vector>

#include "nn/physnet.hpp"

namespace pulsekit::nn {

// Learning-rate policy: linear warmup over the first 30% of steps to the
// peak (init_lr), then cosine annealing down to init_lr / 100. Warmup starts
// at init_lr / 25.
class OneCycleSchedule {
public:
    OneCycleSchedule(double peak_lr, std::size_t total_steps, bool enabled = true)
        : peak_(peak_lr), total_(total_steps ? total_steps : 1), enabled_(enabled) {}

    double lr_at(std::size_t step) const;

private:
    double peak_;
    std::size_t total_;
    bool enabled_;
};

// SGD with classical momentum: v = mu * v + g; p -= lr * v.
// Parameters with requires_grad == false are never touched.
class SgdOptimizer {
public:
    explicit SgdOptimizer(std::vector<NamedParam>& params, double momentum = 0.9);

    void step(double lr);
    void zero_grad();

    // Scales all gradients down when their global L2 norm exceeds max_norm.
    // No-op when max_norm <= 0.
    void clip_grad_norm(double max_norm);

private:
    std::vector<NamedParam>* params_;
    double momentum_;
    std::vector<std::vector<double>> velocity_;
};

} // namespace pulsekit::nn
