#include "ppg/quality.hpp"

#include <algorithm>
#include <cmath>

#include "signal/spectrum.hpp"

namespace pulsekit::ppg {

namespace {

constexpr double kWindowSeconds = 30.0;
constexpr double kShiftSeconds = 2.0;
constexpr double kFineSeconds = 2.0;
constexpr double kFineStepSeconds = 0.5;

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

} // namespace

std::array<double, 4> BuiltinQualityScreen::features(const signal::Waveform& window) {
    const auto& x = window.samples();
    const std::size_t n = x.size();
    if (window.duration_s() < 2.0)
        throw UsageError("quality features: window must cover at least 2 s");

    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(n);
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : x) {
        double d = v - mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= static_cast<double>(n);
    m3 /= static_cast<double>(n);
    m4 /= static_cast<double>(n);

    if (m2 < 1e-18) {
        // Flat line: degenerate moments and no periodicity at all.
        return {0.0, -3.0, 0.0, 0.0};
    }
    const double skewness = m3 / std::pow(m2, 1.5);
    const double kurtosis = m4 / (m2 * m2) - 3.0;

    // Spectral entropy over the pulse band.
    signal::PsdEstimate p = signal::psd(window, next_pow2(std::max<std::size_t>(n, 256)));
    double total = 0.0;
    std::vector<double> band;
    for (std::size_t i = 0; i < p.freqs_hz.size(); ++i) {
        if (p.freqs_hz[i] < 0.4 || p.freqs_hz[i] > 4.0) continue;
        band.push_back(p.power[i]);
        total += p.power[i];
    }
    double entropy = 0.0;
    if (total > 0.0 && band.size() > 1) {
        for (double v : band) {
            if (v <= 0.0) continue;
            double q = v / total;
            entropy -= q * std::log(q);
        }
        entropy /= std::log(static_cast<double>(band.size()));
    }

    // Autocorrelation peak within physiologic lags.
    const double fs = window.sample_rate_hz();
    const auto lag_lo = static_cast<std::size_t>(0.25 * fs);
    const auto lag_hi = std::min(static_cast<std::size_t>(2.5 * fs), n / 2);
    double prominence = 0.0;
    if (lag_hi > lag_lo) {
        for (std::size_t lag = lag_lo; lag <= lag_hi; ++lag) {
            double acc = 0.0;
            for (std::size_t i = 0; i + lag < n; ++i)
                acc += (x[i] - mean) * (x[i + lag] - mean);
            acc /= m2 * static_cast<double>(n);
            prominence = std::max(prominence, acc);
        }
    }
    return {skewness, kurtosis, entropy, prominence};
}

double BuiltinQualityScreen::score(const signal::Waveform& window) const {
    auto f = features(window);
    const FeatureStats& ref = window.duration_s() >= 10.0 ? long_stats_ : short_stats_;
    double z_sum = 0.0;
    for (std::size_t i = 0; i < 4; ++i)
        z_sum += std::abs(f[i] - ref.mean[i]) / ref.stddev[i];
    return -z_sum;
}

std::vector<bool> screen_quality(const signal::Waveform& w, const QualityScreen& screen) {
    const double fs = w.sample_rate_hz();
    const std::size_t n = w.size();
    const auto win = static_cast<std::size_t>(kWindowSeconds * fs);
    const auto shift = static_cast<std::size_t>(kShiftSeconds * fs);

    std::vector<bool> dirty(n, false);

    if (n <= win) {
        // Shorter than one screening window: single full-length verdict.
        bool bad = screen.score(w) < screen.threshold();
        dirty.assign(n, bad);
        return dirty;
    }

    // Coarse pass: majority vote of the 30 s windows covering each sample.
    std::vector<int> votes(n, 0), covers(n, 0);
    for (std::size_t start = 0; start + win <= n; start += shift) {
        signal::Waveform window(
            std::vector<double>(w.samples().begin() + static_cast<std::ptrdiff_t>(start),
                                w.samples().begin() + static_cast<std::ptrdiff_t>(start + win)),
            fs);
        const bool bad = screen.score(window) < screen.threshold();
        for (std::size_t i = start; i < start + win; ++i) {
            ++covers[i];
            if (bad) ++votes[i];
        }
    }
    // Trailing samples not covered by any full window inherit the last verdict.
    for (std::size_t i = 0; i < n; ++i) {
        if (covers[i] == 0)
            dirty[i] = dirty[i > 0 ? i - 1 : 0];
        else
            dirty[i] = votes[i] * 2 > covers[i];
    }

    // Refinement: a 30 s verdict localizes an artifact only to half a window,
    // so re-score 2 s tiles across each flagged run (plus a margin) and keep
    // only samples with dirty local evidence.
    const auto fine = static_cast<std::size_t>(kFineSeconds * fs);
    const auto fine_step = static_cast<std::size_t>(kFineStepSeconds * fs);
    const auto margin = fine;
    std::vector<bool> refined(n, false);
    std::size_t i = 0;
    while (i < n) {
        if (!dirty[i]) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < n && dirty[j]) ++j;
        const std::size_t lo = i > margin ? i - margin : 0;
        const std::size_t hi = std::min(n, j + margin);
        std::vector<int> fvotes(hi - lo, 0), fcovers(hi - lo, 0);
        for (std::size_t s = lo; s + fine <= hi; s += fine_step) {
            signal::Waveform tile(
                std::vector<double>(w.samples().begin() + static_cast<std::ptrdiff_t>(s),
                                    w.samples().begin() + static_cast<std::ptrdiff_t>(s + fine)),
                fs);
            const bool bad = screen.score(tile) < screen.threshold();
            for (std::size_t k = s; k < s + fine; ++k) {
                ++fcovers[k - lo];
                if (bad) ++fvotes[k - lo];
            }
        }
        for (std::size_t k = lo; k < hi; ++k) {
            bool local_bad = fcovers[k - lo] == 0 ? dirty[k]
                                                  : fvotes[k - lo] * 2 > fcovers[k - lo];
            if (dirty[k] && local_bad) refined[k] = true;
        }
        i = j;
    }
    return refined;
}

} // namespace pulsekit::ppg
