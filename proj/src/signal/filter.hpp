#pragma once

#include <complex>
#include <vector>

#include "signal/waveform.hpp"

namespace pulsekit::signal {

struct BandpassSpec {
    double low_cut_hz = 0.4;
    double high_cut_hz = 4.0;
    int order = 2;
};

// Transfer-function coefficients b(z)/a(z), a[0] normalized to 1.
struct FilterCoeffs {
    std::vector<double> b;
    std::vector<double> a;
};

// Butterworth band-pass: analog prototype poles, LP->BP transform with
// frequency pre-warping, bilinear transform. Digital order is 2*spec.order.
FilterCoeffs design_bandpass(const BandpassSpec& spec, double sample_rate_hz);

// |H(e^{j 2 pi f / fs})| for the given coefficients.
double magnitude_response(const FilterCoeffs& c, double freq_hz, double sample_rate_hz);

// Largest pole magnitude (< 1 means stable).
double max_pole_magnitude(const FilterCoeffs& c);

// Single-pass direct form II transposed filter with initial state zi scaled
// by x[0] (steady-state initialization).
std::vector<double> lfilter(const FilterCoeffs& c, const std::vector<double>& x,
                            bool steady_state_init);

// Forward-backward (zero net phase) filtering with odd-reflect padding of
// 3 * digital order samples at both ends. Output length equals input length.
std::vector<double> filtfilt(const FilterCoeffs& c, const std::vector<double>& x);

// filtfilt on a waveform, preserving sample rate and quality mask.
Waveform filter_zero_phase(const Waveform& w, const FilterCoeffs& c);

} // namespace pulsekit::signal
