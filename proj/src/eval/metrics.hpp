#pragma once

#include <string>
#include <vector>

#include "common/error.hpp"

namespace pulsekit::eval {

struct PairedError {
    double ref = 0.0;
    double pred = 0.0;
    double error = 0.0; // pred - ref
};

struct EvalReport {
    double mae = 0.0;
    double rmse = 0.0;
    double mape_pct = 0.0;
    double sd = 0.0; // population std of the signed error
    std::size_t n_windows = 0;
    double tw_seconds = 0.0;
    std::size_t mape_excluded = 0; // zero-reference samples skipped for MAPE
    std::vector<PairedError> per_window;
};

// MAE / RMSE / MAPE / SD over paired references and predictions. Zero
// references are excluded from MAPE (and counted) rather than failing.
EvalReport compute_metrics(const std::vector<double>& refs,
                           const std::vector<double>& preds, double tw_seconds);

std::string render_table(const std::vector<std::pair<std::string, EvalReport>>& rows);
std::string report_to_json(const EvalReport& report);
EvalReport report_from_json(const std::string& json_text);

} // namespace pulsekit::eval
