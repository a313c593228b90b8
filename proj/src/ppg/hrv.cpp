#include "ppg/hrv.hpp"

#include <algorithm>
#include <cmath>

namespace pulsekit::ppg {

std::vector<std::size_t> detect_peaks(const std::vector<double>& x, double fs) {
    std::vector<std::size_t> candidates;
    double mx = 0.0;
    for (double v : x) mx = std::max(mx, v);
    const double floor_level = 0.3 * mx;
    for (std::size_t i = 1; i + 1 < x.size(); ++i)
        if (x[i] >= floor_level && x[i] > x[i - 1] && x[i] >= x[i + 1])
            candidates.push_back(i);

    // Enforce the refractory spacing, keeping the taller peak.
    const auto min_gap = static_cast<std::size_t>(0.25 * fs);
    std::vector<std::size_t> peaks;
    for (std::size_t c : candidates) {
        if (!peaks.empty() && c - peaks.back() < min_gap) {
            if (x[c] > x[peaks.back()]) peaks.back() = c;
        } else {
            peaks.push_back(c);
        }
    }
    return peaks;
}

std::vector<bool> hrv_screen(const signal::Waveform& w, const HrvOptions& opts) {
    const double fs = w.sample_rate_hz();
    const auto win = static_cast<std::size_t>(opts.window_seconds * fs);
    if (win == 0) throw UsageError("hrv_screen: window too short for sample rate");
    const std::size_t n_windows = w.size() / win;

    std::vector<bool> retained(n_windows, false);
    for (std::size_t k = 0; k < n_windows; ++k) {
        const std::size_t lo = k * win, hi = lo + win;
        bool usable = true;
        for (std::size_t i = lo; i < hi; ++i)
            if (!w.mask()[i]) {
                usable = false;
                break;
            }
        if (!usable) continue;

        std::vector<double> seg(w.samples().begin() + static_cast<std::ptrdiff_t>(lo),
                                w.samples().begin() + static_cast<std::ptrdiff_t>(hi));
        auto peaks = detect_peaks(seg, fs);
        if (peaks.size() < 2) continue; // insufficient evidence

        double hr_min = 1e9, hr_max = 0.0;
        for (std::size_t i = 1; i < peaks.size(); ++i) {
            double dt = static_cast<double>(peaks[i] - peaks[i - 1]) / fs;
            double hr = 60.0 / dt;
            hr_min = std::min(hr_min, hr);
            hr_max = std::max(hr_max, hr);
        }
        retained[k] = (hr_max - hr_min) <= opts.max_fluctuation_bpm;
    }
    return retained;
}

} // namespace pulsekit::ppg
