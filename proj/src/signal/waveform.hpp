#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "common/error.hpp"

namespace pulsekit::signal {

// Uniformly sampled 1-D physiological signal with a per-sample usability mask.
class Waveform {
public:
    Waveform(std::vector<double> samples, double sample_rate_hz)
        : Waveform(std::move(samples), sample_rate_hz, {}) {}

    Waveform(std::vector<double> samples, double sample_rate_hz,
             std::vector<bool> quality_mask)
        : samples_(std::move(samples)),
          rate_(sample_rate_hz),
          mask_(std::move(quality_mask)) {
        if (samples_.empty()) throw UsageError("waveform: samples must be non-empty");
        if (!(rate_ > 0.0)) throw UsageError("waveform: sample_rate_hz must be > 0");
        if (mask_.empty()) mask_.assign(samples_.size(), true);
        if (mask_.size() != samples_.size())
            throw UsageError("waveform: quality_mask length must equal samples length");
    }

    const std::vector<double>& samples() const { return samples_; }
    std::vector<double>& samples() { return samples_; }
    const std::vector<bool>& mask() const { return mask_; }
    std::vector<bool>& mask() { return mask_; }
    double sample_rate_hz() const { return rate_; }

    std::size_t size() const { return samples_.size(); }
    double duration_s() const { return static_cast<double>(samples_.size()) / rate_; }

    bool all_masked_out() const {
        for (bool q : mask_)
            if (q) return false;
        return true;
    }

private:
    std::vector<double> samples_;
    double rate_;
    std::vector<bool> mask_;
};

} // namespace pulsekit::signal
