#include "nn/lds.hpp"

#include <algorithm>
#include <cmath>

namespace pulsekit::nn {

namespace {

int bin_of(double label, const LdsConfig& cfg) {
    int b = static_cast<int>(std::lround(label));
    if (b < cfg.grid_min || b > cfg.grid_max)
        throw UsageError("lds_weights: label " + std::to_string(label) +
                         " outside the grid range");
    return b - cfg.grid_min;
}

} // namespace

LdsConfig LdsConfig::for_labels(const std::vector<double>& labels) {
    if (labels.empty()) throw UsageError("lds: empty label set");
    LdsConfig cfg;
    double lo = labels[0], hi = labels[0];
    for (double v : labels) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    cfg.grid_min = static_cast<int>(std::floor(lo));
    cfg.grid_max = static_cast<int>(std::ceil(hi));
    return cfg;
}

std::vector<double> lds_kernel(const LdsConfig& cfg) {
    if (cfg.kernel_size < 1 || cfg.kernel_size % 2 == 0)
        throw UsageError("lds: kernel size must be odd and positive");
    std::vector<double> k(static_cast<std::size_t>(cfg.kernel_size));
    double sum = 0.0;
    for (int j = 0; j < cfg.kernel_size; ++j) {
        double t = static_cast<double>(j + 1) / static_cast<double>(cfg.kernel_size + 1);
        double pdf = std::pow(t, cfg.alpha - 1.0) * std::pow(1.0 - t, cfg.beta - 1.0);
        k[static_cast<std::size_t>(j)] = pdf;
        sum += pdf;
    }
    for (double& v : k) v /= sum;
    return k;
}

std::vector<double> lds_weights(const std::vector<double>& labels, const LdsConfig& cfg) {
    if (labels.empty()) throw UsageError("lds_weights: empty label set");
    if (cfg.grid_max < cfg.grid_min) throw UsageError("lds_weights: empty grid");

    const std::size_t bins = static_cast<std::size_t>(cfg.grid_max - cfg.grid_min) + 1;
    std::vector<double> hist(bins, 0.0);
    for (double v : labels) hist[static_cast<std::size_t>(bin_of(v, cfg))] += 1.0;

    // Centered cross-correlation with the kernel; mass outside the grid is
    // simply absent (zero padding).
    const std::vector<double> kernel = lds_kernel(cfg);
    const int half = cfg.kernel_size / 2;
    std::vector<double> smoothed(bins, 0.0);
    for (std::size_t b = 0; b < bins; ++b) {
        double acc = 0.0;
        for (int j = 0; j < cfg.kernel_size; ++j) {
            int src = static_cast<int>(b) + j - half;
            if (src < 0 || src >= static_cast<int>(bins)) continue;
            acc += kernel[static_cast<std::size_t>(j)] * hist[static_cast<std::size_t>(src)];
        }
        smoothed[b] = acc;
    }

    std::vector<double> weights(labels.size());
    double mean = 0.0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        double density = smoothed[static_cast<std::size_t>(bin_of(labels[i], cfg))];
        if (!(density > 0.0))
            throw NumericError("lds_weights: zero smoothed density at an occupied bin");
        weights[i] = 1.0 / density;
        mean += weights[i];
    }
    mean /= static_cast<double>(weights.size());
    for (double& w : weights) w /= mean;

    // Cap extreme weights from near-empty bins, then restore the unit mean.
    bool capped = false;
    for (double& w : weights)
        if (w > 10.0) {
            w = 10.0;
            capped = true;
        }
    if (capped) {
        double m2 = 0.0;
        for (double w : weights) m2 += w;
        m2 /= static_cast<double>(weights.size());
        for (double& w : weights) w /= m2;
    }
    return weights;
}

} // namespace pulsekit::nn
