#include "signal/filter.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pulsekit::signal {

namespace {

using cplx = std::complex<double>;

// Expand monic polynomial from its roots; index 0 holds the leading coeff.
std::vector<cplx> poly_from_roots(const std::vector<cplx>& roots) {
    std::vector<cplx> c{1.0};
    for (const cplx& r : roots) {
        std::vector<cplx> next(c.size() + 1, 0.0);
        for (std::size_t i = 0; i < c.size(); ++i) {
            next[i] += c[i];
            next[i + 1] -= c[i] * r;
        }
        c = std::move(next);
    }
    return c;
}

std::vector<double> real_coeffs(const std::vector<cplx>& c) {
    std::vector<double> out(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) out[i] = c[i].real();
    return out;
}

// Durand-Kerner root finder for small real polynomials (monic not required).
std::vector<cplx> poly_roots(const std::vector<double>& coeffs) {
    std::vector<cplx> p(coeffs.begin(), coeffs.end());
    while (p.size() > 1 && std::abs(p.front()) == 0.0) p.erase(p.begin());
    const std::size_t deg = p.size() - 1;
    if (deg == 0) return {};
    for (auto& c : p) c /= p.front() == 0.0 ? 1.0 : p.front();
    p[0] = 1.0;

    std::vector<cplx> r(deg);
    cplx seed(0.4, 0.9);
    cplx acc = 1.0;
    for (std::size_t i = 0; i < deg; ++i) {
        acc *= seed;
        r[i] = acc;
    }
    auto eval = [&](cplx x) {
        cplx v = 0.0;
        for (const cplx& c : p) v = v * x + c;
        return v;
    };
    for (int iter = 0; iter < 200; ++iter) {
        double delta = 0.0;
        for (std::size_t i = 0; i < deg; ++i) {
            cplx denom = 1.0;
            for (std::size_t j = 0; j < deg; ++j)
                if (j != i) denom *= r[i] - r[j];
            cplx step = eval(r[i]) / denom;
            r[i] -= step;
            delta = std::max(delta, std::abs(step));
        }
        if (delta < 1e-14) break;
    }
    return r;
}

} // namespace

FilterCoeffs design_bandpass(const BandpassSpec& spec, double sample_rate_hz) {
    const double nyquist = sample_rate_hz / 2.0;
    if (!(spec.low_cut_hz > 0.0 && spec.low_cut_hz < spec.high_cut_hz &&
          spec.high_cut_hz < nyquist))
        throw UsageError("design_bandpass: cutoffs must satisfy 0 < low < high < fs/2");
    if (spec.order < 1) throw UsageError("design_bandpass: order must be >= 1");

    const int n = spec.order;
    const double fs2 = 2.0 * sample_rate_hz;

    // Pre-warp the cutoffs so the bilinear transform lands them exactly.
    const double w1 = fs2 * std::tan(std::numbers::pi * spec.low_cut_hz / sample_rate_hz);
    const double w2 = fs2 * std::tan(std::numbers::pi * spec.high_cut_hz / sample_rate_hz);
    const double w0 = std::sqrt(w1 * w2);
    const double bw = w2 - w1;

    // Butterworth low-pass prototype poles on the unit circle, left half plane.
    std::vector<cplx> lp_poles;
    for (int m = -n + 1; m <= n - 1; m += 2) {
        double theta = std::numbers::pi * m / (2.0 * n);
        lp_poles.push_back(-std::exp(cplx(0.0, theta)));
    }

    // Low-pass -> band-pass: each pole splits into a conjugate pair around w0.
    std::vector<cplx> bp_poles;
    for (const cplx& p : lp_poles) {
        cplx ps = p * (bw / 2.0);
        cplx root = std::sqrt(ps * ps - w0 * w0);
        bp_poles.push_back(ps + root);
        bp_poles.push_back(ps - root);
    }
    // n analog zeros at s = 0; gain bw^n.
    double gain = std::pow(bw, n);

    // Bilinear transform. Analog zeros at the origin map to z = +1; the n
    // zeros at infinity map to z = -1.
    std::vector<cplx> zd, pd;
    cplx num_prod = 1.0, den_prod = 1.0;
    for (int i = 0; i < n; ++i) {
        zd.push_back(1.0);
        num_prod *= fs2; // (fs2 - 0)
    }
    for (int i = 0; i < n; ++i) zd.push_back(-1.0);
    for (const cplx& p : bp_poles) {
        pd.push_back((fs2 + p) / (fs2 - p));
        den_prod *= fs2 - p;
    }
    gain *= (num_prod / den_prod).real();

    std::vector<cplx> bpoly = poly_from_roots(zd);
    std::vector<cplx> apoly = poly_from_roots(pd);
    FilterCoeffs out;
    out.b = real_coeffs(bpoly);
    for (double& c : out.b) c *= gain;
    out.a = real_coeffs(apoly);
    return out;
}

double magnitude_response(const FilterCoeffs& c, double freq_hz, double sample_rate_hz) {
    const double omega = 2.0 * std::numbers::pi * freq_hz / sample_rate_hz;
    cplx num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < c.b.size(); ++k)
        num += c.b[k] * std::exp(cplx(0.0, -omega * static_cast<double>(k)));
    for (std::size_t k = 0; k < c.a.size(); ++k)
        den += c.a[k] * std::exp(cplx(0.0, -omega * static_cast<double>(k)));
    return std::abs(num / den);
}

double max_pole_magnitude(const FilterCoeffs& c) {
    auto roots = poly_roots(c.a);
    double mx = 0.0;
    for (const auto& r : roots) mx = std::max(mx, std::abs(r));
    return mx;
}

std::vector<double> lfilter(const FilterCoeffs& c, const std::vector<double>& x,
                            bool steady_state_init) {
    const std::size_t nb = c.b.size(), na = c.a.size();
    const std::size_t nz = std::max(nb, na) - 1;
    std::vector<double> b = c.b, a = c.a;
    b.resize(nz + 1, 0.0);
    a.resize(nz + 1, 0.0);

    std::vector<double> z(nz, 0.0);
    if (steady_state_init && !x.empty() && nz > 0) {
        // Stationary state for unit step input, solved by back-substitution;
        // scaled by x[0] so a constant input produces its steady response
        // from the first sample.
        double sb = 0.0, sa = 0.0;
        for (double v : b) sb += v;
        for (double v : a) sa += v;
        double k = sb / sa;
        std::vector<double> zi(nz, 0.0);
        for (std::size_t i = nz; i-- > 0;) {
            double tail = (i + 1 < nz) ? zi[i + 1] : 0.0;
            zi[i] = b[i + 1] - a[i + 1] * k + tail;
        }
        for (std::size_t i = 0; i < nz; ++i) z[i] = zi[i] * x[0];
    }

    std::vector<double> y(x.size());
    for (std::size_t m = 0; m < x.size(); ++m) {
        double xm = x[m];
        double ym = b[0] * xm + (nz ? z[0] : 0.0);
        for (std::size_t i = 0; i + 1 < nz; ++i)
            z[i] = b[i + 1] * xm + z[i + 1] - a[i + 1] * ym;
        if (nz) z[nz - 1] = b[nz] * xm - a[nz] * ym;
        y[m] = ym;
    }
    return y;
}

std::vector<double> filtfilt(const FilterCoeffs& c, const std::vector<double>& x) {
    const std::size_t order = std::max(c.a.size(), c.b.size()) - 1;
    const std::size_t pad = 3 * order;
    if (x.size() <= pad)
        throw UsageError("filtfilt: input length must exceed 3x filter order");

    // Odd-reflect extension at both ends.
    std::vector<double> ext;
    ext.reserve(x.size() + 2 * pad);
    for (std::size_t i = pad; i >= 1; --i) ext.push_back(2.0 * x.front() - x[i]);
    ext.insert(ext.end(), x.begin(), x.end());
    for (std::size_t i = 2; i <= pad + 1; ++i)
        ext.push_back(2.0 * x.back() - x[x.size() - i]);

    std::vector<double> y = lfilter(c, ext, true);
    std::reverse(y.begin(), y.end());
    y = lfilter(c, y, true);
    std::reverse(y.begin(), y.end());
    return {y.begin() + static_cast<std::ptrdiff_t>(pad),
            y.begin() + static_cast<std::ptrdiff_t>(pad + x.size())};
}

Waveform filter_zero_phase(const Waveform& w, const FilterCoeffs& c) {
    return Waveform(filtfilt(c, w.samples()), w.sample_rate_hz(), w.mask());
}

} // namespace pulsekit::signal
