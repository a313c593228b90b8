#include "signal/hr.hpp"

#include <algorithm>
#include <cmath>

#include "signal/spectrum.hpp"

namespace pulsekit::signal {

HrEstimate extract_hr_bpm(const Waveform& w, const HrOptions& opts) {
    if (w.duration_s() < 2.0)
        throw UsageError("extract_hr_bpm: waveform must cover at least 2 s");
    if (w.all_masked_out())
        throw NumericError("extract_hr_bpm: no usable samples (all masked)");

    const FilterCoeffs coeffs = design_bandpass(opts.band, w.sample_rate_hz());
    const Waveform filtered = filter_zero_phase(w, coeffs);

    std::size_t pad = opts.min_pad;
    while (pad < w.size()) pad *= 2;
    const PsdEstimate spectrum = psd(filtered, pad);

    const double lo = opts.band.low_cut_hz;
    const double hi = opts.band.high_cut_hz;

    // Confidence check on the filtered periodogram: a real pulse stands well
    // clear of the in-band median.
    std::vector<double> inband;
    double peak = 0.0;
    for (std::size_t i = 0; i < spectrum.freqs_hz.size(); ++i) {
        if (spectrum.freqs_hz[i] < lo || spectrum.freqs_hz[i] > hi) continue;
        inband.push_back(spectrum.power[i]);
        peak = std::max(peak, spectrum.power[i]);
    }
    if (inband.empty())
        throw NumericError("extract_hr_bpm: empty search band");
    std::nth_element(inband.begin(), inband.begin() + static_cast<std::ptrdiff_t>(inband.size() / 2),
                     inband.end());
    const double median = inband[inband.size() / 2];

    // A 2 s window holds under one cycle at the low band edge, where the raw
    // periodogram argmax is badly leakage-biased; the tone fit measures peak
    // power on the same grid without that bias. Fit on the unfiltered samples
    // so the band edges are not tilted by the filter response.
    double mean = 0.0;
    for (double v : w.samples()) mean += v;
    mean /= static_cast<double>(w.size());
    std::vector<double> centered(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) centered[i] = w.samples()[i] - mean;
    const double f_peak = tone_fit_peak(centered, w.sample_rate_hz(), lo, hi, pad);

    HrEstimate out;
    out.bpm = 60.0 * f_peak;
    out.peak_power = peak;
    out.median_inband_power = median;
    out.low_confidence = peak <= 0.0 || peak < opts.confidence_ratio * median;
    return out;
}

} // namespace pulsekit::signal
