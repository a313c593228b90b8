#pragma once

#include <filesystem>

#include "eval/metrics.hpp"

namespace pulsekit::eval {

// Scatter of predictions against references with the ideal y = x reference
// line. Writes <stem>.csv (ref,pred) and <stem>.svg.
void export_scatter(const EvalReport& report, const std::filesystem::path& stem);

// Bland-Altman agreement: per-pair (mean, difference) with the bias line and
// bias +/- 1.96 SD limits. Writes <stem>.csv (mean,diff) and <stem>.svg.
void export_bland_altman(const EvalReport& report, const std::filesystem::path& stem);

struct BlandAltmanStats {
    double bias = 0.0;
    double loa_low = 0.0;  // bias - 1.96 * sd(diff)
    double loa_high = 0.0; // bias + 1.96 * sd(diff)
};

BlandAltmanStats bland_altman_stats(const EvalReport& report);

} // namespace pulsekit::eval
