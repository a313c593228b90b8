#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rppg/pos_chrom.hpp"
#include "signal/hr.hpp"
#include "synth/synth.hpp"
#include "video/detector.hpp"
#include "video/preprocess.hpp"
#include "support/test_util.hpp"

using namespace pulsekit;

namespace {

// Aligned face trace of a synthetic recording, plus its mean HR label.
std::pair<rppg::RoiTrace, double> aligned_trace(const synth::SynthConfig& cfg, int subject,
                                                int recording) {
    auto rec = synth::generate_recording(cfg, subject, recording);
    video::MarkerFaceDetector det;
    auto aligned = video::align_video(rec.frames, det, rec.recording_id);
    REQUIRE(!aligned.clips.empty());

    rppg::RoiTrace trace;
    trace.fps = cfg.fps;
    for (const auto& clip : aligned.clips) {
        auto part = rppg::trace_from_clip(clip.frames);
        trace.mean_rgb.insert(trace.mean_rgb.end(), part.mean_rgb.begin(),
                              part.mean_rgb.end());
    }
    double hr = 0.0;
    for (double v : rec.hr_series_bpm) hr += v;
    hr /= static_cast<double>(rec.hr_series_bpm.size());
    return {trace, hr};
}

synth::SynthConfig cfg_around(double hr_bpm) {
    synth::SynthConfig cfg;
    cfg.clip_seconds = 8.0;
    cfg.frame_h = 64;
    cfg.frame_w = 64;
    cfg.hr_min_bpm = hr_bpm - 8.0;
    cfg.hr_max_bpm = hr_bpm + 8.0;
    return cfg;
}

} // namespace

TEST_CASE("pos recovers the synthetic heart rate") {
    auto [trace, hr] = aligned_trace(cfg_around(120.0), 0, 0);
    auto wave = rppg::pos(trace);
    CHECK(wave.size() == trace.length());
    CHECK(std::abs(signal::extract_hr_bpm(wave).bpm - hr) <= 2.0);
}

TEST_CASE("chrom recovers the synthetic heart rate") {
    auto [trace, hr] = aligned_trace(cfg_around(90.0), 1, 0);
    auto wave = rppg::chrom(trace);
    CHECK(std::abs(signal::extract_hr_bpm(wave).bpm - hr) <= 2.0);
}

TEST_CASE("pos is robust to global illumination drift") {
    auto [trace, hr] = aligned_trace(cfg_around(110.0), 2, 0);
    double base = signal::extract_hr_bpm(rppg::pos(trace)).bpm;
    rppg::RoiTrace drifted = trace;
    for (std::size_t t = 0; t < drifted.length(); ++t) {
        double gain = 1.0 + 0.06 * std::sin(2.0 * std::numbers::pi * 0.1 *
                                            static_cast<double>(t) / drifted.fps);
        for (auto& v : drifted.mean_rgb[t]) v *= gain;
    }
    double shifted = signal::extract_hr_bpm(rppg::pos(drifted)).bpm;
    CHECK(std::abs(shifted - base) <= 2.0);
    CHECK(std::abs(shifted - hr) <= 2.0);
}

TEST_CASE("classical extractors reject a constant trace") {
    rppg::RoiTrace trace;
    trace.fps = 30.0;
    trace.mean_rgb.assign(90, {0.5, 0.4, 0.3});
    CHECK_THROWS_AS(rppg::pos(trace), NumericError);
    CHECK_THROWS_AS(rppg::chrom(trace), NumericError);
}

TEST_CASE("chrom heart rate is invariant to amplitude scaling") {
    auto [trace, hr] = aligned_trace(cfg_around(100.0), 3, 0);
    double base = signal::extract_hr_bpm(rppg::chrom(trace)).bpm;
    rppg::RoiTrace scaled = trace;
    for (auto& row : scaled.mean_rgb)
        for (auto& v : row) v *= 0.37;
    double after = signal::extract_hr_bpm(rppg::chrom(scaled)).bpm;
    CHECK(std::abs(after - base) <= 1e-6);
}

TEST_CASE("a minimal 60-frame clip yields a 60-sample waveform") {
    auto [trace, hr] = aligned_trace(cfg_around(130.0), 4, 0);
    rppg::RoiTrace minimal;
    minimal.fps = trace.fps;
    minimal.mean_rgb.assign(trace.mean_rgb.begin(), trace.mean_rgb.begin() + 60);
    auto wave = rppg::chrom(minimal);
    CHECK(wave.size() == 60);
}

TEST_CASE("pos and chrom agree and tolerate per-channel gain perturbations") {
    auto [trace, hr] = aligned_trace(cfg_around(105.0), 5, 0);
    double f_pos = signal::extract_hr_bpm(rppg::pos(trace)).bpm;
    double f_chrom = signal::extract_hr_bpm(rppg::chrom(trace)).bpm;
    CHECK(std::abs(f_pos - f_chrom) <= 3.0);

    Rng rng(21);
    for (int trial = 0; trial < 4; ++trial) {
        rppg::RoiTrace gained = trace;
        double g[3] = {rng.uniform(0.8, 1.2), rng.uniform(0.8, 1.2), rng.uniform(0.8, 1.2)};
        for (auto& row : gained.mean_rgb)
            for (int c = 0; c < 3; ++c) row[static_cast<std::size_t>(c)] *= g[c];
        CHECK(std::abs(signal::extract_hr_bpm(rppg::pos(gained)).bpm - f_pos) <= 2.0);
        CHECK(std::abs(signal::extract_hr_bpm(rppg::chrom(gained)).bpm - f_chrom) <= 2.0);
    }
}
