#pragma once

#include "ppg/hrv.hpp"
#include "ppg/quality.hpp"
#include "ppg/reconstruct.hpp"

namespace pulsekit::ppg {

struct DenoiseResult {
    signal::Waveform cleaned;
    CleanReport report;
    std::vector<bool> retained_windows; // per 2 s window, after the HRV gate
};

// Full ground-truth cleaning chain: quality screening, short-gap
// reconstruction, then HRV-gated window rejection. The report's
// retained_fraction is the surviving share of 2 s windows; callers must drop
// the video clips paired with rejected windows.
DenoiseResult denoise_ppg(const signal::Waveform& w, const QualityScreen& screen,
                          const Reconstructor& reconstructor);

} // namespace pulsekit::ppg
