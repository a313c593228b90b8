#pragma once

#include <string>
#include <vector>

#include "eval/metrics.hpp"

namespace pulsekit::eval {

// One predicted 2 s window: the model's pulse waveform plus its reference.
struct WindowedPrediction {
    std::string recording_id;
    int window_index = 0;
    std::vector<double> waveform; // pulse samples at fps
    double hr_ref_bpm = 0.0;
    double fps = 30.0;
};

struct MultiWindowResult {
    std::vector<std::pair<int, EvalReport>> tables; // (window seconds, report)
    std::vector<int> skipped_lengths;               // no recording long enough
};

// Longer evaluation windows are formed by concatenating consecutive 2 s
// windows of the same recording before spectral HR extraction; the reference
// is the mean of the member window references.
MultiWindowResult multi_window_eval(const std::vector<WindowedPrediction>& windows,
                                    const std::vector<int>& window_lengths_s);

} // namespace pulsekit::eval
