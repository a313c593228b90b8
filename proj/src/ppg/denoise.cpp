#include "ppg/denoise.hpp"

#include "signal/filter.hpp"

namespace pulsekit::ppg {

DenoiseResult denoise_ppg(const signal::Waveform& w, const QualityScreen& screen,
                          const Reconstructor& reconstructor) {
    std::vector<bool> dirty = screen_quality(w, screen);
    auto [cleaned, report] = reconstruct_short_gaps(w, dirty, reconstructor);

    // HRV runs on the band-passed cleaned signal but keeps the (possibly
    // restored) quality mask.
    const auto coeffs = signal::design_bandpass({0.4, 4.0, 2}, w.sample_rate_hz());
    signal::Waveform banded = signal::filter_zero_phase(cleaned, coeffs);
    std::vector<bool> retained = hrv_screen(banded);

    double kept = 0.0;
    for (bool r : retained) kept += r ? 1.0 : 0.0;
    report.retained_fraction =
        retained.empty() ? 0.0 : kept / static_cast<double>(retained.size());
    return DenoiseResult{std::move(cleaned), std::move(report), std::move(retained)};
}

} // namespace pulsekit::ppg
