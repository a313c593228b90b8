#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "signal/waveform.hpp"

namespace pulsekit::signal {

struct PsdEstimate {
    std::vector<double> freqs_hz; // strictly ascending, [0, fs/2]
    std::vector<double> power;    // >= 0 elementwise, same length

    // Index of the largest power within [lo_hz, hi_hz]; -1 if the band is empty.
    std::ptrdiff_t argmax_in_band(double lo_hz, double hi_hz) const;
};

// In-place DFT; uses radix-2 FFT for power-of-two sizes, direct evaluation
// otherwise.
void dft(std::vector<std::complex<double>>& data, bool inverse = false);

// One-sided periodogram of the mean-removed, zero-padded signal. Interior
// bins are doubled so the total power equals the mean-removed signal energy
// (Parseval).
PsdEstimate psd(const Waveform& w, std::size_t zero_pad_to);

// Power explained by a least-squares {cos, sin, const} fit at freq_hz.
// Immune to the leakage bias a short window inflicts on the periodogram.
double tone_fit_power(const std::vector<double>& x, double sample_rate_hz,
                      double freq_hz);

// Scans the fit power over the in-band periodogram grid and refines the best
// bin with a parabolic step. Returns the frequency in Hz.
double tone_fit_peak(const std::vector<double>& x, double sample_rate_hz,
                     double lo_hz, double hi_hz, std::size_t grid_size);

} // namespace pulsekit::signal
