#include "eval/metrics.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace pulsekit::eval {

EvalReport compute_metrics(const std::vector<double>& refs,
                           const std::vector<double>& preds, double tw_seconds) {
    if (refs.empty() || refs.size() != preds.size())
        throw UsageError("compute_metrics: need equal non-empty ref/pred vectors");

    EvalReport r;
    r.n_windows = refs.size();
    r.tw_seconds = tw_seconds;
    r.per_window.reserve(refs.size());

    double abs_sum = 0.0, sq_sum = 0.0, err_sum = 0.0, ape_sum = 0.0;
    std::size_t ape_n = 0;
    for (std::size_t i = 0; i < refs.size(); ++i) {
        double e = preds[i] - refs[i];
        r.per_window.push_back({refs[i], preds[i], e});
        abs_sum += std::abs(e);
        sq_sum += e * e;
        err_sum += e;
        if (refs[i] != 0.0) {
            ape_sum += std::abs(e) / std::abs(refs[i]);
            ++ape_n;
        } else {
            ++r.mape_excluded;
        }
    }
    const auto n = static_cast<double>(refs.size());
    r.mae = abs_sum / n;
    r.rmse = std::sqrt(sq_sum / n);
    double mean_err = err_sum / n;
    r.sd = std::sqrt(std::max(0.0, sq_sum / n - mean_err * mean_err));
    r.mape_pct = ape_n ? 100.0 * ape_sum / static_cast<double>(ape_n) : 0.0;
    return r;
}

std::string render_table(const std::vector<std::pair<std::string, EvalReport>>& rows) {
    std::ostringstream out;
    out << std::left << std::setw(18) << "method" << std::right << std::setw(10) << "MAE"
        << std::setw(10) << "RMSE" << std::setw(10) << "SD" << std::setw(10) << "MAPE%"
        << std::setw(8) << "TW(s)" << std::setw(8) << "n" << '\n';
    out << std::string(74, '-') << '\n';
    out << std::fixed << std::setprecision(3);
    for (const auto& [name, r] : rows)
        out << std::left << std::setw(18) << name << std::right << std::setw(10) << r.mae
            << std::setw(10) << r.rmse << std::setw(10) << r.sd << std::setw(10)
            << r.mape_pct << std::setw(8) << std::setprecision(0) << r.tw_seconds
            << std::setw(8) << r.n_windows << std::setprecision(3) << '\n';
    return out.str();
}

std::string report_to_json(const EvalReport& r) {
    nlohmann::json j;
    j["mae"] = r.mae;
    j["rmse"] = r.rmse;
    j["mape_pct"] = r.mape_pct;
    j["sd"] = r.sd;
    j["n_windows"] = r.n_windows;
    j["tw_seconds"] = r.tw_seconds;
    j["mape_excluded"] = r.mape_excluded;
    auto rows = nlohmann::json::array();
    for (const auto& p : r.per_window) rows.push_back({p.ref, p.pred, p.error});
    j["per_window"] = rows;
    return j.dump(2) + "\n";
}

EvalReport report_from_json(const std::string& text) {
    EvalReport r;
    try {
        auto j = nlohmann::json::parse(text);
        r.mae = j.at("mae");
        r.rmse = j.at("rmse");
        r.mape_pct = j.at("mape_pct");
        r.sd = j.at("sd");
        r.n_windows = j.at("n_windows");
        r.tw_seconds = j.at("tw_seconds");
        r.mape_excluded = j.value("mape_excluded", 0);
        for (const auto& row : j.at("per_window"))
            r.per_window.push_back({row[0], row[1], row[2]});
    } catch (const nlohmann::json::exception& e) {
        throw DataError("eval report parse error: " + std::string(e.what()));
    }
    return r;
}

} // namespace pulsekit::eval
