#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "common/rng.hpp"
#include "signal/filter.hpp"
#include "signal/hr.hpp"
#include "signal/resample.hpp"
#include "signal/spectrum.hpp"
#include "support/test_util.hpp"

using namespace pulsekit;
using namespace pulsekit::signal;
using pulsekit::testing::sine;
using pulsekit::testing::sine_wave;

namespace {

// Reference coefficients for butter(order=2, [0.4, 4.0] Hz, fs=30),
// computed offline with an independent filter-design package.
const double kRefB[] = {9.13149004358319583e-02, 0.0, -1.82629800871663917e-01,
                        0.0, 9.13149004358319583e-02};
const double kRefA[] = {1.0, -2.87313777368898959e+00, 3.14486849281812297e+00,
                        -1.61626843721778957e+00, 3.47665394851723208e-01};

double rms(const std::vector<double>& x, std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += x[i] * x[i];
    return std::sqrt(s / static_cast<double>(hi - lo));
}

} // namespace

TEST_CASE("design_bandpass matches offline reference to 1e-9") {
    FilterCoeffs c = design_bandpass({0.4, 4.0, 2}, 30.0);
    REQUIRE(c.b.size() == 5);
    REQUIRE(c.a.size() == 5);
    for (int i = 0; i < 5; ++i) {
        CHECK(std::abs(c.b[i] - kRefB[i]) < 1e-9);
        CHECK(std::abs(c.a[i] - kRefA[i]) < 1e-9);
    }
    CHECK(c.a[0] == 1.0);
}

TEST_CASE("design_bandpass midband gain is unity") {
    FilterCoeffs c = design_bandpass({0.4, 4.0, 2}, 30.0);
    double mid = std::sqrt(0.4 * 4.0);
    CHECK(magnitude_response(c, mid, 30.0) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("design_bandpass rejects inverted and out-of-range cutoffs") {
    CHECK_THROWS_AS(design_bandpass({4.0, 0.4, 2}, 30.0), UsageError);
    CHECK_THROWS_AS(design_bandpass({0.4, 16.0, 2}, 30.0), UsageError);
    CHECK_THROWS_AS(design_bandpass({0.0, 4.0, 2}, 30.0), UsageError);
}

TEST_CASE("design_bandpass -3dB points near the requested cutoffs") {
    FilterCoeffs c = design_bandpass({0.4, 4.0, 2}, 30.0);
    auto find_crossing = [&](double lo, double hi) {
        // Bisect |H| = 1/sqrt(2) between lo and hi.
        double target = 1.0 / std::sqrt(2.0);
        for (int i = 0; i < 200; ++i) {
            double mid = 0.5 * (lo + hi);
            if (magnitude_response(c, mid, 30.0) < target)
                lo = mid;
            else
                hi = mid;
        }
        return 0.5 * (lo + hi);
    };
    double f_lo = find_crossing(0.05, std::sqrt(0.4 * 4.0));
    CHECK(f_lo == doctest::Approx(0.4).epsilon(0.05));
    // Upper crossing: magnitude decreasing, so swap the bisection sense.
    double lo = std::sqrt(0.4 * 4.0), hi = 14.0;
    double target = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (magnitude_response(c, mid, 30.0) > target)
            lo = mid;
        else
            hi = mid;
    }
    CHECK(0.5 * (lo + hi) == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("filter stability across random valid specs") {
    Rng rng(20240901);
    for (int trial = 0; trial < 60; ++trial) {
        double fs = rng.uniform(20.0, 250.0);
        double nyq = fs / 2.0;
        double lo = rng.uniform(0.02 * nyq, 0.75 * nyq);
        double hi = rng.uniform(lo * 1.05, 0.97 * nyq);
        int order = 1 + static_cast<int>(rng.below(5));
        FilterCoeffs c = design_bandpass({lo, hi, order}, fs);
        CHECK(max_pole_magnitude(c) < 1.0);
    }
}

TEST_CASE("filter_zero_phase preserves an in-band tone") {
    FilterCoeffs c = design_bandpass({0.4, 4.0, 2}, 30.0);
    Waveform w = sine_wave(1.5, 30.0, 600);
    Waveform y = filter_zero_phase(w, c);
    REQUIRE(y.size() == w.size());
    // Compare steady-state amplitude away from the ends.
    double got = 0.0;
    for (std::size_t i = 150; i < 450; ++i) got = std::max(got, std::abs(y.samples()[i]));
    CHECK(got == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("filter_zero_phase kills DC") {
    FilterCoeffs c = design_bandpass({0.4, 4.0, 2}, 30.0);
    Waveform w(std::vector<double>(300, 2.5), 30.0);
    Waveform y = filter_zero_phase(w, c);
    for (double v : y.samples()) CHECK(std::abs(v) < 1e-6);
}

TEST_CASE("filter_zero_phase attenuates out-of-band tone by >= 12 dB") {
    FilterCoeffs c = design_bandpass({0.4, 4.0, 2}, 30.0);
    Waveform w = sine_wave(10.0, 30.0, 600);
    Waveform y = filter_zero_phase(w, c);
    double ratio = rms(y.samples(), 100, 500) / rms(w.samples(), 100, 500);
    CHECK(ratio < std::pow(10.0, -12.0 / 20.0));
}

TEST_CASE("filtfilt rejects too-short input") {
    FilterCoeffs c = design_bandpass({0.4, 4.0, 2}, 30.0);
    std::vector<double> x(12, 1.0); // pad requirement is 3 * order = 12
    CHECK_THROWS_AS(filtfilt(c, x), UsageError);
}

TEST_CASE("zero-phase filtering commutes with time reversal away from edges") {
    FilterCoeffs c = design_bandpass({0.4, 4.0, 2}, 30.0);
    Rng rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        std::size_t n = 300 + rng.below(120);
        double f = rng.uniform(0.6, 3.5);
        std::vector<double> x = sine(f, 30.0, n, 1.0, rng.uniform(0.0, 6.0));
        for (auto& v : x) v += 0.05 * rng.normal();
        std::vector<double> xr(x.rbegin(), x.rend());
        std::vector<double> a = filtfilt(c, xr);
        std::vector<double> b = filtfilt(c, x);
        std::reverse(b.begin(), b.end());
        // Transients from the 0.4 Hz poles decay over ~3 s; compare interior.
        // A causal single-pass filter fails this by an order of magnitude.
        for (std::size_t i = 90; i + 90 < n; ++i)
            CHECK(std::abs(a[i] - b[i]) < 1e-2);
    }
}

TEST_CASE("psd finds a pure tone at the right bin") {
    // On a 60-sample window the rectangular-window leakage can move the
    // periodogram argmax by up to ~0.02 Hz depending on phase; with 300
    // samples it is inside 0.01 Hz for any phase.
    {
        Waveform w = sine_wave(2.0, 30.0, 60);
        PsdEstimate p = psd(w, 4096);
        auto idx = p.argmax_in_band(0.0, 15.0);
        REQUIRE(idx >= 0);
        CHECK(std::abs(p.freqs_hz[static_cast<std::size_t>(idx)] - 2.0) < 0.025);
    }
    {
        Waveform w = sine_wave(2.0, 30.0, 300);
        PsdEstimate p = psd(w, 4096);
        auto idx = p.argmax_in_band(0.0, 15.0);
        CHECK(std::abs(p.freqs_hz[static_cast<std::size_t>(idx)] - 2.0) < 0.01);
    }
}

TEST_CASE("psd of a constant signal is zero") {
    Waveform w(std::vector<double>(60, 3.0), 30.0);
    PsdEstimate p = psd(w, 1024);
    for (double v : p.power) CHECK(std::abs(v) < 1e-20);
}

TEST_CASE("psd global peak belongs to the dominant tone") {
    auto x = sine(1.0, 30.0, 300);
    auto y = sine(3.0, 30.0, 300, 0.3);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += y[i];
    PsdEstimate p = psd(Waveform(x, 30.0), 4096);
    auto idx = p.argmax_in_band(0.0, 15.0);
    CHECK(std::abs(p.freqs_hz[static_cast<std::size_t>(idx)] - 1.0) < 0.02);
}

TEST_CASE("psd satisfies Parseval for pow2 and non-pow2 lengths") {
    Rng rng(42);
    for (std::size_t pad : {std::size_t(512), std::size_t(300)}) {
        std::vector<double> x(200);
        for (auto& v : x) v = rng.uniform(-1.0, 1.0);
        Waveform w(x, 30.0);
        double mean = 0.0;
        for (double v : x) mean += v;
        mean /= static_cast<double>(x.size());
        double energy = 0.0;
        for (double v : x) energy += (v - mean) * (v - mean);
        PsdEstimate p = psd(w, pad);
        double total = 0.0;
        for (double v : p.power) total += v;
        CHECK(total == doctest::Approx(energy).epsilon(1e-6));
    }
}

TEST_CASE("psd argument validation") {
    Waveform w = sine_wave(1.0, 30.0, 64);
    CHECK_THROWS_AS(psd(w, 32), UsageError);
}

TEST_CASE("extract_hr_bpm on a clean 2 Hz pulse") {
    Waveform w = sine_wave(2.0, 30.0, 60);
    HrEstimate e = extract_hr_bpm(w);
    CHECK(std::abs(e.bpm - 120.0) <= 0.5);
    CHECK_FALSE(e.low_confidence);
}

TEST_CASE("extract_hr_bpm under additive noise (Monte Carlo, fixed seed)") {
    // 1.9 Hz tone at SNR 10 dB: amplitude 1 -> signal power 0.5,
    // noise sigma = sqrt(0.05).
    Rng rng(1234);
    double sigma = std::sqrt(0.05);
    double total_err = 0.0;
    int trials = 40;
    for (int t = 0; t < trials; ++t) {
        auto x = sine(1.9, 30.0, 60, 1.0, rng.uniform(0.0, 6.28));
        for (auto& v : x) v += sigma * rng.normal();
        HrEstimate e = extract_hr_bpm(Waveform(x, 30.0));
        total_err += std::abs(e.bpm - 114.0);
    }
    CHECK(total_err / trials <= 2.0);
}

TEST_CASE("extract_hr_bpm forces respiration-only peaks inside the band") {
    // 0.2 Hz is below the band: the reported rate is clamped in-band and the
    // confidence flag follows the peak-vs-3x-median rule exactly.
    Waveform w = sine_wave(0.2, 30.0, 300);
    HrEstimate e = extract_hr_bpm(w);
    CHECK(e.bpm >= 24.0);
    CHECK(e.bpm <= 240.0);
    CHECK(e.low_confidence == (e.peak_power < 3.0 * e.median_inband_power));
}

TEST_CASE("extract_hr_bpm flags a degenerate zero spectrum") {
    // Constant input leaves no in-band power at all.
    std::vector<double> x(90, 5.0);
    HrEstimate e = extract_hr_bpm(Waveform(x, 30.0));
    CHECK(e.low_confidence);
}

TEST_CASE("extract_hr_bpm rejects an all-masked waveform") {
    auto x = sine(2.0, 30.0, 90);
    Waveform w(x, 30.0, std::vector<bool>(x.size(), false));
    CHECK_THROWS_AS(extract_hr_bpm(w), NumericError);
}

TEST_CASE("extract_hr_bpm invariant to positive scaling and offset") {
    Rng rng(99);
    for (int t = 0; t < 8; ++t) {
        double f = rng.uniform(0.8, 3.5);
        auto x = sine(f, 30.0, 90, 1.0, rng.uniform(0.0, 6.28));
        for (auto& v : x) v += 0.1 * rng.normal();
        double base = extract_hr_bpm(Waveform(x, 30.0)).bpm;
        auto y = x;
        for (auto& v : y) v = 7.3 * v + 42.0;
        double scaled = extract_hr_bpm(Waveform(y, 30.0)).bpm;
        CHECK(std::abs(scaled - base) < 1e-6);
    }
}

TEST_CASE("resample_linear downsamples a ramp exactly") {
    std::vector<double> ramp(60);
    for (std::size_t i = 0; i < 60; ++i) ramp[i] = static_cast<double>(i);
    Waveform w(ramp, 60.0);
    Waveform r = resample_linear(w, 30.0);
    REQUIRE(r.size() == 30);
    for (std::size_t i = 0; i < r.size(); ++i)
        CHECK(r.samples()[i] == doctest::Approx(2.0 * static_cast<double>(i)));
}

TEST_CASE("resample_linear to the same rate is the identity") {
    auto x = sine(1.3, 60.0, 120);
    std::vector<bool> mask(x.size(), true);
    mask[17] = false;
    Waveform w(x, 60.0, mask);
    Waveform r = resample_linear(w, 60.0);
    REQUIRE(r.size() == w.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        CHECK(r.samples()[i] == w.samples()[i]);
        CHECK(r.mask()[i] == w.mask()[i]);
    }
}

TEST_CASE("resample_linear ANDs the mask across bracketing samples") {
    // 60 -> 45 Hz: source position of target k is 4k/3. Source sample 34
    // falls strictly between targets 25 (pos 33.33) and 26 (pos 34.67), so
    // both go false; the exact-hit neighbours 24 (pos 32) and 27 (pos 36)
    // stay usable.
    std::vector<double> x(60, 1.0);
    std::vector<bool> mask(60, true);
    mask[34] = false;
    Waveform w(x, 60.0, mask);
    Waveform r = resample_linear(w, 45.0);
    CHECK_FALSE(r.mask()[25]);
    CHECK_FALSE(r.mask()[26]);
    CHECK(r.mask()[24]);
    CHECK(r.mask()[27]);
}
