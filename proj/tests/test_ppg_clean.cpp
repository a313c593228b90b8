#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ppg/denoise.hpp"
#include "signal/filter.hpp"
#include "signal/hr.hpp"
#include "signal/spectrum.hpp"
#include "synth/synth.hpp"
#include "support/test_util.hpp"

using namespace pulsekit;
using pulsekit::testing::sine;

namespace {

synth::SynthConfig ppg_cfg(double seconds = 240.0) {
    synth::SynthConfig cfg;
    cfg.clip_seconds = seconds;
    cfg.frame_h = 8;
    cfg.frame_w = 8;
    return cfg;
}

signal::Waveform clean_ppg(int subject = 0, double seconds = 240.0) {
    return synth::generate_recording(ppg_cfg(seconds), subject, 0).ppg_ref;
}

// Pulse train with per-beat periods, sharp enough for peak detection.
signal::Waveform pulse_train(const std::vector<double>& periods_s, double fs) {
    std::vector<double> peak_times;
    double t = 0.25;
    for (double p : periods_s) {
        peak_times.push_back(t);
        t += p;
    }
    auto n = static_cast<std::size_t>((t + 0.25) * fs);
    std::vector<double> x(n, 0.0);
    for (double pt : peak_times)
        for (std::size_t i = 0; i < n; ++i) {
            double d = (static_cast<double>(i) / fs - pt) / 0.06;
            x[i] += std::exp(-0.5 * d * d);
        }
    return signal::Waveform(x, fs);
}

} // namespace

TEST_CASE("screen_quality keeps clean synthetic PPG nearly untouched") {
    ppg::BuiltinQualityScreen screen;
    auto w = clean_ppg(3);
    auto dirty = ppg::screen_quality(w, screen);
    double frac = 0.0;
    for (bool d : dirty) frac += d ? 1.0 : 0.0;
    frac /= static_cast<double>(dirty.size());
    CHECK(frac < 0.05);
}

TEST_CASE("screen_quality flags a fully corrupted signal") {
    ppg::BuiltinQualityScreen screen;
    auto corrupted = synth::inject_artifacts(clean_ppg(1), 1.0, 5).wave;
    auto dirty = ppg::screen_quality(corrupted, screen);
    double frac = 0.0;
    for (bool d : dirty) frac += d ? 1.0 : 0.0;
    frac /= static_cast<double>(dirty.size());
    CHECK(frac > 0.9);
}

TEST_CASE("screen_quality on short input gives one uniform verdict") {
    ppg::BuiltinQualityScreen screen;
    auto w = clean_ppg(2, 10.0); // 10 s, shorter than a 30 s window
    auto dirty = ppg::screen_quality(w, screen);
    bool first = dirty[0];
    for (bool d : dirty) CHECK(d == first);
    CHECK_FALSE(first);
}

TEST_CASE("builtin score separates clean pulse, noise, and flat-line") {
    ppg::BuiltinQualityScreen screen;
    auto w = clean_ppg(4, 60.0);
    signal::Waveform window(
        std::vector<double>(w.samples().begin(), w.samples().begin() + 30 * 60), 60.0);
    CHECK(screen.score(window) > screen.threshold());

    Rng rng(8);
    std::vector<double> noise(30 * 60);
    for (auto& v : noise) v = rng.normal();
    CHECK(screen.score(signal::Waveform(noise, 60.0)) < screen.threshold());

    std::vector<double> flat(30 * 60, 0.42);
    CHECK(screen.score(signal::Waveform(flat, 60.0)) < screen.threshold());
}

TEST_CASE("short gaps are reconstructed with the pre-corruption heart rate") {
    auto w = clean_ppg(5, 120.0);
    const double fs = w.sample_rate_hz();
    double truth_bpm = signal::extract_hr_bpm(w).bpm;

    // Corrupt exactly 3 s mid-signal.
    auto corrupted = w;
    const auto g0 = static_cast<std::size_t>(51.0 * fs);
    const auto g1 = static_cast<std::size_t>(54.0 * fs);
    Rng rng(3);
    std::vector<bool> mask(w.size(), false);
    for (std::size_t i = g0; i < g1; ++i) {
        corrupted.samples()[i] = 3.0 * rng.normal();
        mask[i] = true;
    }

    ppg::BuiltinReconstructor recon;
    auto [fixed, report] = ppg::reconstruct_short_gaps(corrupted, mask, recon);
    REQUIRE(report.flagged_intervals.size() == 1);
    CHECK(report.flagged_intervals[0].action == "reconstructed");

    // Samples outside the gap are untouched bit-for-bit.
    for (std::size_t i = 0; i < w.size(); ++i)
        if (i < g0 || i >= g1) CHECK(fixed.samples()[i] == corrupted.samples()[i]);
    for (bool q : fixed.mask()) CHECK(q);

    // The restored stretch carries the pre-corruption rate.
    signal::Waveform segment(
        std::vector<double>(fixed.samples().begin() + static_cast<std::ptrdiff_t>(g0),
                            fixed.samples().begin() + static_cast<std::ptrdiff_t>(g1)),
        fs);
    CHECK(std::abs(signal::extract_hr_bpm(segment).bpm - truth_bpm) <= 5.0);
}

TEST_CASE("gaps of 20 s are dropped") {
    auto w = clean_ppg(6, 120.0);
    const double fs = w.sample_rate_hz();
    std::vector<bool> mask(w.size(), false);
    const auto g0 = static_cast<std::size_t>(40.0 * fs);
    const auto g1 = static_cast<std::size_t>(60.0 * fs);
    for (std::size_t i = g0; i < g1; ++i) mask[i] = true;

    ppg::BuiltinReconstructor recon;
    auto [fixed, report] = ppg::reconstruct_short_gaps(w, mask, recon);
    REQUIRE(report.flagged_intervals.size() == 1);
    CHECK(report.flagged_intervals[0].action == "dropped");
    for (std::size_t i = g0; i < g1; ++i) CHECK_FALSE(fixed.mask()[i]);
}

TEST_CASE("clean input passes through reconstruction untouched") {
    auto w = clean_ppg(7, 60.0);
    ppg::BuiltinReconstructor recon;
    auto [fixed, report] = ppg::reconstruct_short_gaps(w, std::vector<bool>(w.size(), false),
                                                       recon);
    CHECK(report.flagged_intervals.empty());
    CHECK(fixed.samples() == w.samples());
    CHECK(report.retained_fraction == 1.0);
}

TEST_CASE("a gap at the signal boundary is dropped, not reconstructed") {
    auto w = clean_ppg(8, 60.0);
    std::vector<bool> mask(w.size(), false);
    for (std::size_t i = 0; i < static_cast<std::size_t>(3.0 * w.sample_rate_hz()); ++i)
        mask[i] = true;
    ppg::BuiltinReconstructor recon;
    auto [fixed, report] = ppg::reconstruct_short_gaps(w, mask, recon);
    REQUIRE(report.flagged_intervals.size() == 1);
    CHECK(report.flagged_intervals[0].action == "dropped");
}

TEST_CASE("builtin reconstructor recovers a stationary tone") {
    const double fs = 60.0;
    auto x = sine(2.0, fs, static_cast<std::size_t>(8.0 * fs));
    signal::Waveform before(x, fs), after(x, fs);
    ppg::BuiltinReconstructor recon;
    auto fill = recon.reconstruct(before, static_cast<std::size_t>(3.0 * fs), after);
    REQUIRE(fill.has_value());
    REQUIRE(fill->size() == static_cast<std::size_t>(3.0 * fs));
    double f = signal::tone_fit_peak(*fill, fs, 0.4, 4.0, 4096);
    CHECK(std::abs(f - 2.0) <= 0.05);
}

TEST_CASE("builtin reconstructor sweeps between differing context rates") {
    const double fs = 60.0;
    auto lo = sine(1.8, fs, static_cast<std::size_t>(8.0 * fs));
    auto hi = sine(2.2, fs, static_cast<std::size_t>(8.0 * fs));
    ppg::BuiltinReconstructor recon;
    auto fill = recon.reconstruct(signal::Waveform(lo, fs),
                                  static_cast<std::size_t>(6.0 * fs),
                                  signal::Waveform(hi, fs));
    REQUIRE(fill.has_value());
    // Short-time frequency track over 2 s slices must rise monotonically.
    std::vector<double> track;
    for (std::size_t start = 0; start + static_cast<std::size_t>(2.0 * fs) <= fill->size();
         start += static_cast<std::size_t>(fs)) {
        std::vector<double> seg(fill->begin() + static_cast<std::ptrdiff_t>(start),
                                fill->begin() + static_cast<std::ptrdiff_t>(
                                                    start + static_cast<std::size_t>(2.0 * fs)));
        track.push_back(signal::tone_fit_peak(seg, fs, 0.4, 4.0, 4096));
    }
    for (std::size_t i = 1; i < track.size(); ++i) CHECK(track[i] >= track[i - 1] - 0.02);
    CHECK(track.front() < track.back());
}

TEST_CASE("builtin reconstructor edge cases") {
    const double fs = 60.0;
    auto x = sine(2.0, fs, static_cast<std::size_t>(8.0 * fs));
    ppg::BuiltinReconstructor recon;
    SUBCASE("zero-length gap gives empty output") {
        auto fill = recon.reconstruct(signal::Waveform(x, fs), 0, signal::Waveform(x, fs));
        REQUIRE(fill.has_value());
        CHECK(fill->empty());
    }
    SUBCASE("insufficient context is refused") {
        auto shorty = sine(2.0, fs, static_cast<std::size_t>(2.0 * fs));
        auto fill = recon.reconstruct(signal::Waveform(shorty, fs), 60,
                                      signal::Waveform(x, fs));
        CHECK_FALSE(fill.has_value());
    }
}

TEST_CASE("hrv_screen keeps steady pulse windows") {
    // 120 bpm steady: period 0.5 s.
    auto w = pulse_train(std::vector<double>(40, 0.5), 60.0);
    auto retained = ppg::hrv_screen(w);
    REQUIRE(!retained.empty());
    std::size_t kept = 0;
    for (bool r : retained) kept += r ? 1 : 0;
    CHECK(kept == retained.size());
}

TEST_CASE("hrv_screen rejects a 20 bpm within-window fluctuation") {
    // One window alternating 120 and 140 bpm beats: spread 20 > 15.
    std::vector<double> periods{0.5, 60.0 / 140.0, 0.5, 60.0 / 140.0};
    auto w = pulse_train(periods, 60.0);
    auto retained = ppg::hrv_screen(w);
    REQUIRE(!retained.empty());
    CHECK_FALSE(retained[0]);
}

TEST_CASE("hrv_screen excludes windows with fewer than two peaks") {
    std::vector<double> flat(240, 0.0); // 4 s of nothing at 60 Hz
    auto retained = ppg::hrv_screen(signal::Waveform(flat, 60.0));
    for (bool r : retained) CHECK_FALSE(r);
}

TEST_CASE("hrv_screen excludes windows with masked samples") {
    auto w = pulse_train(std::vector<double>(40, 0.5), 60.0);
    for (std::size_t i = 130; i < 150; ++i) w.mask()[i] = false;
    auto retained = ppg::hrv_screen(w);
    CHECK_FALSE(retained[1]);
    CHECK(retained[0]);
}

TEST_CASE("denoise pipeline output is consistent across stages") {
    ppg::BuiltinQualityScreen screen;
    ppg::BuiltinReconstructor recon;
    auto w = clean_ppg(9, 240.0);
    auto corrupted = synth::inject_artifacts(w, 0.2, 77);

    auto dirty = ppg::screen_quality(corrupted.wave, screen);
    auto res = ppg::denoise_ppg(corrupted.wave, screen, recon);

    // Reconstruction may only restore samples the screen flagged; everything
    // else keeps its original mask.
    for (std::size_t i = 0; i < w.size(); ++i)
        if (!dirty[i]) CHECK(res.cleaned.mask()[i]);

    // Flagged intervals ascending and non-overlapping.
    const auto& iv = res.report.flagged_intervals;
    for (std::size_t i = 1; i < iv.size(); ++i)
        CHECK(iv[i].start_s >= iv[i - 1].end_s);

    CHECK(res.report.retained_fraction > 0.5);
    CHECK(res.report.retained_fraction <= 1.0);
    CHECK(res.retained_windows.size() == w.size() / static_cast<std::size_t>(2.0 * 60.0));
}
