#pragma once

#include <cstddef>

#include "signal/filter.hpp"
#include "signal/waveform.hpp"

namespace pulsekit::signal {

struct HrOptions {
    BandpassSpec band{0.4, 4.0, 2};
    std::size_t min_pad = 4096; // periodogram length (grown to cover input)
    double confidence_ratio = 3.0;
};

struct HrEstimate {
    double bpm = 0.0;
    bool low_confidence = false;
    double peak_power = 0.0;
    double median_inband_power = 0.0;
};

// Band-pass the waveform, locate the dominant in-band frequency and return it
// in beats per minute. The in-band peak must exceed confidence_ratio times
// the median in-band power or the estimate is flagged low-confidence.
HrEstimate extract_hr_bpm(const Waveform& w, const HrOptions& opts = {});

} // namespace pulsekit::signal
