#pragma once

#include <vector>

#include "common/error.hpp"

namespace pulsekit::nn {

// Label distribution smoothing for imbalanced regression: the empirical
// label histogram is smoothed with a Beta-shaped kernel and samples are
// weighted by inverse smoothed frequency.
struct LdsConfig {
    int kernel_size = 7;
    double alpha = 2.0;
    double beta = 5.0;
    int grid_min = 0; // integer label bins, inclusive
    int grid_max = 0;

    static LdsConfig for_labels(const std::vector<double>& labels);
};

// Beta(alpha, beta) density sampled at kernel_size equally spaced interior
// points of (0, 1), normalized to sum 1. Applied as given (no symmetrizing).
std::vector<double> lds_kernel(const LdsConfig& cfg);

// Per-sample weights, mean-normalized to 1 and capped at 10 (then
// re-normalized). Labels must fall within the grid range.
std::vector<double> lds_weights(const std::vector<double>& labels, const LdsConfig& cfg);

} // namespace pulsekit::nn
