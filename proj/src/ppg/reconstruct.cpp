#include "ppg/reconstruct.hpp"

#include <cmath>
#include <numbers>
#include <tuple>

#include "signal/filter.hpp"
#include "signal/spectrum.hpp"

namespace pulsekit::ppg {

namespace {

struct ToneModel {
    double freq_hz = 0.0;
    double a1 = 0.0, b1 = 0.0; // fundamental cos/sin at the fit origin
    double a2 = 0.0, b2 = 0.0; // second harmonic
    double amplitude = 0.0;
};

// Least-squares cos/sin coefficients of x at freq, time origin at
// sample index `origin` (may be outside the array).
std::pair<double, double> fit_quadrature(const std::vector<double>& x, double fs,
                                         double freq, double origin) {
    double cc = 0, ss = 0, cs = 0, xc = 0, xs = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double t = (static_cast<double>(i) - origin) / fs;
        double c = std::cos(2.0 * std::numbers::pi * freq * t);
        double s = std::sin(2.0 * std::numbers::pi * freq * t);
        cc += c * c;
        ss += s * s;
        cs += c * s;
        xc += x[i] * c;
        xs += x[i] * s;
    }
    double det = cc * ss - cs * cs;
    if (std::abs(det) < 1e-12) return {0.0, 0.0};
    return {(xc * ss - xs * cs) / det, (xs * cc - xc * cs) / det};
}

// Fit dominant tone + harmonic on a context segment. `origin` is the sample
// index (relative to the segment start) corresponding to gap time zero.
ToneModel fit_tone(const signal::Waveform& context, double origin) {
    ToneModel m;
    std::vector<double> x = context.samples();
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    for (double& v : x) v -= mean;

    const double fs = context.sample_rate_hz();
    m.freq_hz = signal::tone_fit_peak(x, fs, 0.4, 4.0, 4096);

    // Phase/amplitude from the last two seconds next to the gap.
    auto tail_len = static_cast<std::size_t>(std::min<double>(
        static_cast<double>(x.size()), 2.0 * fs));
    std::size_t tail_from = origin >= static_cast<double>(x.size())
                                ? x.size() - tail_len
                                : 0; // before-context fits its tail, after fits its head
    std::vector<double> seg(x.begin() + static_cast<std::ptrdiff_t>(tail_from),
                            x.begin() + static_cast<std::ptrdiff_t>(tail_from + tail_len));
    double seg_origin = origin - static_cast<double>(tail_from);
    std::tie(m.a1, m.b1) = fit_quadrature(seg, fs, m.freq_hz, seg_origin);
    std::tie(m.a2, m.b2) = fit_quadrature(seg, fs, 2.0 * m.freq_hz, seg_origin);
    m.amplitude = std::sqrt(m.a1 * m.a1 + m.b1 * m.b1);
    return m;
}

} // namespace

std::optional<std::vector<double>> BuiltinReconstructor::reconstruct(
    const signal::Waveform& context_before, std::size_t gap_len,
    const signal::Waveform& context_after) const {
    if (gap_len == 0) return std::vector<double>{};

    const double fs = context_before.sample_rate_hz();
    const auto need = static_cast<std::size_t>(kMinContextSeconds * fs);
    if (context_before.size() < need || context_after.size() < need) return std::nullopt;
    if (std::abs(context_after.sample_rate_hz() - fs) > 1e-9) return std::nullopt;

    // Time zero of the synthesis sits at the first gap sample.
    ToneModel before = fit_tone(context_before, static_cast<double>(context_before.size()));
    ToneModel after = fit_tone(context_after, -static_cast<double>(gap_len));

    double dc_before = 0.0;
    for (double v : context_before.samples()) dc_before += v;
    dc_before /= static_cast<double>(context_before.size());
    double dc_after = 0.0;
    for (double v : context_after.samples()) dc_after += v;
    dc_after /= static_cast<double>(context_after.size());

    std::vector<double> out(gap_len);
    const double amp_ratio = before.amplitude > 1e-12
                                 ? after.amplitude / before.amplitude
                                 : 1.0;
    double phase = 0.0; // radians advanced past the before-model's origin
    for (std::size_t i = 0; i < gap_len; ++i) {
        double u = gap_len > 1 ? static_cast<double>(i) / static_cast<double>(gap_len - 1)
                               : 0.0;
        double f = before.freq_hz + (after.freq_hz - before.freq_hz) * u;
        double scale = 1.0 + (amp_ratio - 1.0) * u;
        double c1 = std::cos(phase), s1 = std::sin(phase);
        double c2 = std::cos(2.0 * phase), s2 = std::sin(2.0 * phase);
        // Rotating the fitted quadrature pair keeps the waveform phase
        // continuous at the left boundary.
        double v = scale * (before.a1 * c1 + before.b1 * s1 + before.a2 * c2 +
                            before.b2 * s2);
        out[i] = v + dc_before + (dc_after - dc_before) * u;
        phase += 2.0 * std::numbers::pi * f / fs;
    }
    return out;
}

std::pair<signal::Waveform, CleanReport> reconstruct_short_gaps(
    const signal::Waveform& w, const std::vector<bool>& dirty_mask,
    const Reconstructor& reconstructor) {
    if (dirty_mask.size() != w.size())
        throw UsageError("reconstruct_short_gaps: mask length mismatch");

    const double fs = w.sample_rate_hz();
    const auto max_gap = static_cast<std::size_t>(kMaxReconstructSeconds * fs);
    const auto context_len = static_cast<std::size_t>(8.0 * fs);
    const auto chunk_len = static_cast<std::size_t>(2.0 * fs);

    signal::Waveform out = w;
    std::vector<bool> clean(dirty_mask.size());
    for (std::size_t k = 0; k < clean.size(); ++k) clean[k] = !dirty_mask[k];
    CleanReport report;

    std::size_t i = 0;
    while (i < w.size()) {
        if (dirty_mask[i] == false) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < w.size() && dirty_mask[j]) ++j;
        const std::size_t len = j - i;
        FlaggedInterval interval{static_cast<double>(i) / fs, static_cast<double>(j) / fs,
                                 "dropped"};

        bool reconstructed = false;
        if (len < max_gap) {
            // Usable context: contiguous clean samples flanking the run.
            std::size_t after_to = j;
            while (after_to < w.size() && clean[after_to] && after_to - j < context_len)
                ++after_to;

            // The run is filled left-to-right in 2 s chunks; each chunk sees
            // the already-restored prefix as part of its left context.
            reconstructed = true;
            for (std::size_t pos = i; pos < j && reconstructed;) {
                std::size_t piece = std::min(chunk_len, j - pos);
                std::size_t before_from = pos;
                while (before_from > 0 && clean[before_from - 1] &&
                       pos - (before_from - 1) <= context_len)
                    --before_from;
                if (before_from == pos || after_to == j) {
                    reconstructed = false;
                    break;
                }
                signal::Waveform before(
                    std::vector<double>(
                        out.samples().begin() + static_cast<std::ptrdiff_t>(before_from),
                        out.samples().begin() + static_cast<std::ptrdiff_t>(pos)),
                    fs);
                signal::Waveform after(
                    std::vector<double>(out.samples().begin() + static_cast<std::ptrdiff_t>(j),
                                        out.samples().begin() + static_cast<std::ptrdiff_t>(after_to)),
                    fs);
                auto fill = reconstructor.reconstruct(before, piece, after);
                if (!fill || fill->size() != piece) {
                    reconstructed = false;
                    break;
                }
                for (std::size_t k = 0; k < piece; ++k) {
                    out.samples()[pos + k] = (*fill)[k];
                    clean[pos + k] = true;
                }
                pos += piece;
            }
            if (reconstructed) {
                for (std::size_t k = i; k < j; ++k) out.mask()[k] = true;
                interval.action = "reconstructed";
            } else {
                // Roll back partial fills; the whole run is dropped.
                for (std::size_t k = i; k < j; ++k) {
                    out.samples()[k] = w.samples()[k];
                    clean[k] = false;
                }
            }
        }
        if (!reconstructed)
            for (std::size_t k = i; k < j; ++k) out.mask()[k] = false;

        report.flagged_intervals.push_back(interval);
        i = j;
    }

    std::size_t usable = 0;
    for (bool q : out.mask()) usable += q ? 1 : 0;
    report.retained_fraction = static_cast<double>(usable) / static_cast<double>(w.size());
    return {std::move(out), std::move(report)};
}

} // namespace pulsekit::ppg
