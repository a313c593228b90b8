#pragma once

#include <vector>

#include "signal/waveform.hpp"

namespace pulsekit::ppg {

// Local maxima above 0.3x the window max, at least 0.25 s apart (larger peak
// wins on conflict). Input should already be band-passed.
std::vector<std::size_t> detect_peaks(const std::vector<double>& x, double fs);

struct HrvOptions {
    double window_seconds = 2.0;
    double max_fluctuation_bpm = 15.0;
};

// Per-2 s-window keep/reject flags. A window is rejected when the spread of
// instantaneous HR (from successive peak intervals) exceeds the threshold,
// when it holds fewer than two peaks, or when any sample is masked unusable.
std::vector<bool> hrv_screen(const signal::Waveform& w, const HrvOptions& opts = {});

} // namespace pulsekit::ppg
