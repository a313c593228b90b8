#include "signal/resample.hpp"

#include <cmath>
#include <cstddef>

namespace pulsekit::signal {

Waveform resample_linear(const Waveform& w, double target_hz) {
    if (!(target_hz > 0.0)) throw UsageError("resample_linear: target_hz must be > 0");

    const std::size_t n = w.size();
    const double src_rate = w.sample_rate_hz();
    const double span_s = static_cast<double>(n - 1) / src_rate;
    const std::size_t m = static_cast<std::size_t>(std::floor(span_s * target_hz + 1e-9)) + 1;

    std::vector<double> samples(m);
    std::vector<bool> mask(m);
    for (std::size_t k = 0; k < m; ++k) {
        if (n == 1) {
            samples[k] = w.samples()[0];
            mask[k] = w.mask()[0];
            continue;
        }
        double pos = static_cast<double>(k) / target_hz * src_rate;
        std::size_t i = static_cast<std::size_t>(std::floor(pos + 1e-9));
        if (i >= n - 1) i = n - 2;
        double frac = pos - static_cast<double>(i);
        if (std::abs(frac) < 1e-9) {
            // Exactly on a source sample: copy bit-for-bit.
            samples[k] = w.samples()[i];
            mask[k] = w.mask()[i];
        } else {
            samples[k] = w.samples()[i] * (1.0 - frac) + w.samples()[i + 1] * frac;
            mask[k] = w.mask()[i] && w.mask()[i + 1];
        }
    }
    return Waveform(std::move(samples), target_hz, std::move(mask));
}

} // namespace pulsekit::signal
