#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <set>

#include "io/digest.hpp"
#include "signal/hr.hpp"
#include "synth/synth.hpp"
#include "support/test_util.hpp"

using namespace pulsekit;
using pulsekit::testing::TempDir;

namespace {

synth::SynthConfig small_config() {
    synth::SynthConfig cfg;
    cfg.seed = 7;
    cfg.n_subjects = 3;
    cfg.clips_per_subject = 2;
    cfg.clip_seconds = 6.0;
    cfg.frame_h = 64;
    cfg.frame_w = 64;
    return cfg;
}

} // namespace

TEST_CASE("generate_corpus is byte-identical across runs with the same seed") {
    TempDir a("synth_a"), b("synth_b");
    synth::SynthConfig cfg = small_config();
    generate_corpus(cfg, a.path());
    generate_corpus(cfg, b.path());

    namespace fs = std::filesystem;
    std::size_t compared = 0;
    for (const auto& entry : fs::recursive_directory_iterator(a.path())) {
        if (!entry.is_regular_file()) continue;
        auto rel = fs::relative(entry.path(), a.path());
        CHECK(io::digest_file(entry.path()) == io::digest_file(b.path() / rel));
        ++compared;
    }
    CHECK(compared >= 3u * 2u * 2u + 2u); // frames + ppg per recording, manifest, truth
}

TEST_CASE("artifact_rate zero leaves the reference PPG mask clean") {
    synth::SynthConfig cfg = small_config();
    cfg.artifact_rate = 0.0;
    auto clip = synth::generate_recording(cfg, 0, 0);
    for (bool q : clip.ppg_ref.mask()) CHECK(q);
    CHECK(clip.corruption_s.empty());
}

TEST_CASE("clean reference PPG reproduces the HR label") {
    synth::SynthConfig cfg = small_config();
    for (int s = 0; s < 3; ++s) {
        auto clip = synth::generate_recording(cfg, s, 0);
        double mean_hr = 0.0;
        for (double v : clip.hr_series_bpm) mean_hr += v;
        mean_hr /= static_cast<double>(clip.hr_series_bpm.size());
        auto est = signal::extract_hr_bpm(clip.ppg_ref);
        CHECK(std::abs(est.bpm - mean_hr) <= 0.5);
    }
}

TEST_CASE("labels never leave the configured ranges") {
    synth::SynthConfig cfg = small_config();
    cfg.n_subjects = 6;
    for (int s = 0; s < cfg.n_subjects; ++s)
        for (int r = 0; r < cfg.clips_per_subject; ++r) {
            auto clip = synth::generate_recording(cfg, s, r);
            for (double v : clip.hr_series_bpm) {
                CHECK(v >= cfg.hr_min_bpm);
                CHECK(v <= cfg.hr_max_bpm);
            }
            for (double v : clip.spo2_series_pct) {
                CHECK(v >= cfg.spo2_min_pct);
                CHECK(v <= cfg.spo2_max_pct);
            }
        }
}

TEST_CASE("chrominance encoding is invertible within 0.5% saturation") {
    synth::SynthConfig cfg = small_config();
    cfg.clip_seconds = 8.0;
    for (int s = 0; s < 4; ++s) {
        auto clip = synth::generate_recording(cfg, s, 1);
        auto upright = clip.frames.rotated90((4 - clip.orientation_deg / 90) % 4);
        double decoded = synth::decode_spo2_from_clip(upright);
        double truth = 0.0;
        for (double v : clip.spo2_series_pct) truth += v;
        truth /= static_cast<double>(clip.spo2_series_pct.size());
        CHECK(std::abs(decoded - truth) <= 0.5);
    }
}

TEST_CASE("pixel pulse amplitude vs shot noise per preset") {
    synth::SynthConfig clean = small_config();
    synth::SynthConfig hard = clean.hard_preset();
    // Green-channel pulse amplitude in intensity units.
    double amp = clean.green_ac * 0.55;
    CHECK(amp / clean.shot_noise_sigma >= 10.0);
    CHECK(amp / hard.shot_noise_sigma >= 0.5);
    CHECK(amp / hard.shot_noise_sigma <= 2.0);
}

TEST_CASE("inject_artifacts rate 0 is the identity") {
    auto w = testing::sine_wave(2.0, 60.0, 3600);
    auto res = synth::inject_artifacts(w, 0.0, 11);
    CHECK(res.intervals_s.empty());
    CHECK(res.wave.samples() == w.samples());
}

TEST_CASE("inject_artifacts rate 1 corrupts every sample") {
    auto w = testing::sine_wave(2.0, 60.0, 1200);
    auto res = synth::inject_artifacts(w, 1.0, 11);
    REQUIRE(res.intervals_s.size() == 1);
    CHECK(res.intervals_s[0].first == 0.0);
    CHECK(res.intervals_s[0].second == doctest::Approx(20.0));
    CHECK(res.corrupted_fraction == 1.0);
}

TEST_CASE("inject_artifacts hits the requested corruption fraction") {
    auto w = testing::sine_wave(2.0, 60.0, 60 * 240); // 240 s
    for (uint64_t seed : {3u, 17u, 99u}) {
        auto res = synth::inject_artifacts(w, 0.2, seed);
        CHECK(res.corrupted_fraction >= 0.15);
        CHECK(res.corrupted_fraction <= 0.25);
        // Intervals ascending, non-overlapping, inside the signal.
        for (std::size_t i = 0; i < res.intervals_s.size(); ++i) {
            CHECK(res.intervals_s[i].first < res.intervals_s[i].second);
            if (i > 0) CHECK(res.intervals_s[i].first >= res.intervals_s[i - 1].second);
        }
    }
}

TEST_CASE("inject_artifacts validates rate") {
    auto w = testing::sine_wave(2.0, 60.0, 600);
    CHECK_THROWS_AS(synth::inject_artifacts(w, 1.5, 1), UsageError);
}

TEST_CASE("rotation bins cycle through all four orientations") {
    synth::SynthConfig cfg = small_config();
    cfg.n_subjects = 2;
    cfg.clips_per_subject = 4;
    std::set<int> seen;
    for (int r = 0; r < 4; ++r)
        seen.insert(synth::generate_recording(cfg, 0, r).orientation_deg);
    CHECK(seen == std::set<int>{0, 90, 180, 270});
}
