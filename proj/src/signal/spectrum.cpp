#include "signal/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pulsekit::signal {

namespace {

using cplx = std::complex<double>;

bool is_pow2(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

void fft_radix2(std::vector<cplx>& a, bool inverse) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        double ang = 2.0 * std::numbers::pi / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
        cplx wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w = 1.0;
            for (std::size_t k = 0; k < len / 2; ++k) {
                cplx u = a[i + k];
                cplx v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (inverse)
        for (auto& v : a) v /= static_cast<double>(n);
}

void dft_direct(std::vector<cplx>& a, bool inverse) {
    const std::size_t n = a.size();
    std::vector<cplx> out(n, 0.0);
    double sgn = inverse ? 1.0 : -1.0;
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t t = 0; t < n; ++t) {
            double ang = sgn * 2.0 * std::numbers::pi * static_cast<double>(k) *
                         static_cast<double>(t) / static_cast<double>(n);
            out[k] += a[t] * cplx(std::cos(ang), std::sin(ang));
        }
        if (inverse) out[k] /= static_cast<double>(n);
    }
    a = std::move(out);
}

} // namespace

void dft(std::vector<cplx>& data, bool inverse) {
    if (data.empty()) return;
    if (is_pow2(data.size()))
        fft_radix2(data, inverse);
    else
        dft_direct(data, inverse);
}

std::ptrdiff_t PsdEstimate::argmax_in_band(double lo_hz, double hi_hz) const {
    std::ptrdiff_t best = -1;
    double best_p = -1.0;
    for (std::size_t i = 0; i < freqs_hz.size(); ++i) {
        if (freqs_hz[i] < lo_hz || freqs_hz[i] > hi_hz) continue;
        if (power[i] > best_p) {
            best_p = power[i];
            best = static_cast<std::ptrdiff_t>(i);
        }
    }
    return best;
}

PsdEstimate psd(const Waveform& w, std::size_t zero_pad_to) {
    const std::size_t n = w.size();
    if (n < 2) throw UsageError("psd: need at least 2 samples");
    if (zero_pad_to < n) throw UsageError("psd: zero_pad_to must be >= signal length");

    double mean = 0.0;
    for (double v : w.samples()) mean += v;
    mean /= static_cast<double>(n);

    std::vector<cplx> buf(zero_pad_to, 0.0);
    for (std::size_t i = 0; i < n; ++i) buf[i] = w.samples()[i] - mean;
    dft(buf);

    const std::size_t half = zero_pad_to / 2;
    const double fs = w.sample_rate_hz();
    PsdEstimate out;
    out.freqs_hz.resize(half + 1);
    out.power.resize(half + 1);
    for (std::size_t k = 0; k <= half; ++k) {
        out.freqs_hz[k] = fs * static_cast<double>(k) / static_cast<double>(zero_pad_to);
        double p = std::norm(buf[k]) / static_cast<double>(zero_pad_to);
        if (k != 0 && !(k == half && zero_pad_to % 2 == 0)) p *= 2.0;
        out.power[k] = p;
    }
    return out;
}

double tone_fit_power(const std::vector<double>& x, double sample_rate_hz,
                      double freq_hz) {
    // Least squares of x against {cos(2 pi f t), sin(2 pi f t), 1}; the
    // explained variance of the fitted oscillation is the tone power.
    const std::size_t n = x.size();
    const double w = 2.0 * std::numbers::pi * freq_hz / sample_rate_hz;
    double cc = 0, ss = 0, cs = 0, c1 = 0, s1 = 0;
    double xc = 0, xs = 0, x1 = 0;
    for (std::size_t t = 0; t < n; ++t) {
        double ct = std::cos(w * static_cast<double>(t));
        double st = std::sin(w * static_cast<double>(t));
        cc += ct * ct;
        ss += st * st;
        cs += ct * st;
        c1 += ct;
        s1 += st;
        xc += x[t] * ct;
        xs += x[t] * st;
        x1 += x[t];
    }
    const double dn = static_cast<double>(n);
    // Normal equations for [a, b, c] (3x3 symmetric), solved by elimination.
    double m[3][4] = {{cc, cs, c1, xc}, {cs, ss, s1, xs}, {c1, s1, dn, x1}};
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
        std::swap(m[col], m[piv]);
        if (std::abs(m[col][col]) < 1e-12) return 0.0; // degenerate basis
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            double f = m[r][col] / m[col][col];
            for (int cix = col; cix < 4; ++cix) m[r][cix] -= f * m[col][cix];
        }
    }
    const double a = m[0][3] / m[0][0];
    const double b = m[1][3] / m[1][1];
    // Variance of the oscillatory part a*cos + b*sin around its own mean.
    double sum = 0, sum2 = 0;
    for (std::size_t t = 0; t < n; ++t) {
        double v = a * std::cos(w * static_cast<double>(t)) +
                   b * std::sin(w * static_cast<double>(t));
        sum += v;
        sum2 += v * v;
    }
    return sum2 - sum * sum / dn;
}

double tone_fit_peak(const std::vector<double>& x, double sample_rate_hz,
                     double lo_hz, double hi_hz, std::size_t grid_size) {
    const double df = sample_rate_hz / static_cast<double>(grid_size);
    std::size_t k_lo = static_cast<std::size_t>(std::ceil(lo_hz / df));
    std::size_t k_hi = static_cast<std::size_t>(std::floor(hi_hz / df));
    if (k_hi <= k_lo) k_hi = k_lo + 1;

    std::size_t best_k = k_lo;
    double best_p = -1.0;
    std::vector<double> powers(k_hi - k_lo + 1);
    for (std::size_t k = k_lo; k <= k_hi; ++k) {
        double p = tone_fit_power(x, sample_rate_hz, static_cast<double>(k) * df);
        powers[k - k_lo] = p;
        if (p > best_p) {
            best_p = p;
            best_k = k;
        }
    }
    double f = static_cast<double>(best_k) * df;
    if (best_k > k_lo && best_k < k_hi) {
        // Parabolic refinement over the three bins around the peak.
        double p0 = powers[best_k - 1 - k_lo], p1 = powers[best_k - k_lo],
               p2 = powers[best_k + 1 - k_lo];
        double denom = p0 - 2.0 * p1 + p2;
        if (std::abs(denom) > 1e-30) {
            double shift = 0.5 * (p0 - p2) / denom;
            shift = std::clamp(shift, -0.5, 0.5);
            f += shift * df;
        }
    }
    return std::clamp(f, lo_hz, hi_hz);
}

} // namespace pulsekit::signal
