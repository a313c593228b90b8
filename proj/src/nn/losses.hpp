#pragma once

#include "nn/tensor.hpp"

namespace pulsekit::nn {

inline constexpr double kLossEpsilon = 1e-8;

// Negative Pearson correlation: 1 - r(pred, gt), with the stabilizing
// epsilon added to the denominator. Bounded to [0, 2]; a zero-variance
// input saturates toward 1 instead of producing NaNs.
Tensor pearson_loss(const Tensor& pred, const Tensor& gt);

// Weighted RMSE: sqrt(sum w e^2 / (sum w + eps)). Weights are expected
// pre-normalized to mean 1; an all-zero weight vector is a degenerate batch.
Tensor weighted_rmse(const Tensor& pred, const Tensor& gt, const std::vector<double>& weights);

} // namespace pulsekit::nn
