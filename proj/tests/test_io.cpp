#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include "common/rng.hpp"
#include "io/containers.hpp"
#include "io/digest.hpp"
#include "io/manifest.hpp"
#include "support/test_util.hpp"

using namespace pulsekit;
using pulsekit::testing::TempDir;

namespace {

video::FrameTensor random_frames(uint64_t seed, std::size_t t = 4, std::size_t h = 6,
                                 std::size_t w = 5) {
    Rng rng(seed);
    video::FrameTensor ft(t, h, w, 30.0);
    for (auto& v : ft.data())
        v = std::round(rng.uniform() * 255.0) / 255.0; // representable in u8
    return ft;
}

signal::Waveform random_wave(uint64_t seed, std::size_t n = 333) {
    Rng rng(seed);
    std::vector<double> x(n);
    std::vector<bool> q(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = rng.normal();
        q[i] = rng.uniform() > 0.2;
    }
    return signal::Waveform(std::move(x), 60.0, std::move(q));
}

void corrupt_byte(const std::filesystem::path& p, std::size_t offset, char value) {
    std::fstream f(p, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(static_cast<std::streamoff>(offset));
    f.write(&value, 1);
}

io::Manifest tiny_manifest() {
    io::Manifest m;
    for (int s = 0; s < 2; ++s) {
        io::SubjectEntry sub;
        sub.subject_id = "s0" + std::to_string(s);
        for (int c = 0; c < 2; ++c) {
            io::ClipEntry e;
            e.clip_id = sub.subject_id + "c" + std::to_string(c);
            e.recording_id = sub.subject_id + "r00";
            e.window_index = c;
            e.hr_bpm = {120.0};
            e.spo2_pct = {97.0};
            e.split = s == 0 ? "train" : "test";
            sub.clips.push_back(e);
        }
        m.subjects.push_back(sub);
    }
    return m;
}

} // namespace

TEST_CASE("frame container round-trips bit-exactly") {
    TempDir dir("pfvf");
    auto ft = random_frames(5);
    auto p1 = dir.path() / "a.pfvf";
    auto p2 = dir.path() / "b.pfvf";
    io::write_frames(p1, ft);
    auto back = io::read_frames(p1);
    io::write_frames(p2, back);
    CHECK(io::digest_file(p1) == io::digest_file(p2));
    CHECK(back.frames() == ft.frames());
    CHECK(back.fps() == ft.fps());
    for (std::size_t i = 0; i < ft.data().size(); ++i)
        CHECK(back.data()[i] == doctest::Approx(ft.data()[i]).epsilon(1e-12));
}

TEST_CASE("wave container round-trips bit-exactly") {
    TempDir dir("pfwv");
    auto w = random_wave(9);
    auto p1 = dir.path() / "a.pfwv";
    auto p2 = dir.path() / "b.pfwv";
    io::write_wave(p1, w);
    auto back = io::read_wave(p1);
    io::write_wave(p2, back);
    CHECK(io::digest_file(p1) == io::digest_file(p2));
    CHECK(back.sample_rate_hz() == w.sample_rate_hz());
    CHECK(back.samples() == w.samples());
    CHECK(back.mask() == w.mask());
}

TEST_CASE("containers reject bad magic, truncation and trailing garbage") {
    TempDir dir("badfiles");
    auto p = dir.path() / "w.pfwv";
    io::write_wave(p, random_wave(1, 64));

    SUBCASE("bad magic") {
        corrupt_byte(p, 0, 'X');
        CHECK_THROWS_AS(io::read_wave(p), DataError);
    }
    SUBCASE("truncated payload") {
        auto size = std::filesystem::file_size(p);
        std::filesystem::resize_file(p, size - 3);
        CHECK_THROWS_AS(io::read_wave(p), DataError);
    }
    SUBCASE("trailing garbage") {
        std::ofstream app(p, std::ios::app | std::ios::binary);
        app << "junk";
        app.close();
        CHECK_THROWS_AS(io::read_wave(p), DataError);
    }
    SUBCASE("unsupported version") {
        corrupt_byte(p, 4, 9);
        CHECK_THROWS_AS(io::read_wave(p), DataError);
    }
}

TEST_CASE("frame container rejects truncation and garbage too") {
    TempDir dir("badframes");
    auto p = dir.path() / "f.pfvf";
    io::write_frames(p, random_frames(2));
    SUBCASE("truncated") {
        std::filesystem::resize_file(p, std::filesystem::file_size(p) - 1);
        CHECK_THROWS_AS(io::read_frames(p), DataError);
    }
    SUBCASE("garbage") {
        std::ofstream app(p, std::ios::app | std::ios::binary);
        app << "z";
        app.close();
        CHECK_THROWS_AS(io::read_frames(p), DataError);
    }
}

TEST_CASE("waveform CSV round-trips values, rate and mask") {
    TempDir dir("csv");
    auto w = random_wave(17, 120);
    auto p = dir.path() / "w.csv";
    io::write_wave_csv(p, w);
    auto back = io::read_wave_csv(p);
    REQUIRE(back.size() == w.size());
    CHECK(back.sample_rate_hz() == doctest::Approx(w.sample_rate_hz()).epsilon(1e-9));
    for (std::size_t i = 0; i < w.size(); ++i) {
        CHECK(back.samples()[i] == w.samples()[i]); // 17 digits round-trip doubles
        CHECK(back.mask()[i] == w.mask()[i]);
    }
}

TEST_CASE("ppm import reads a P6 image") {
    TempDir dir("ppm");
    auto p = dir.path() / "img.ppm";
    {
        std::ofstream out(p, std::ios::binary);
        out << "P6\n# comment\n2 2\n255\n";
        unsigned char px[12] = {255, 0, 0, 0, 255, 0, 0, 0, 255, 10, 20, 30};
        out.write(reinterpret_cast<char*>(px), 12);
    }
    auto ft = io::read_ppm(p);
    CHECK(ft.frames() == 1);
    CHECK(ft.height() == 2);
    CHECK(ft.width() == 2);
    CHECK(ft.at(0, 0, 0, 0) == doctest::Approx(1.0));
    CHECK(ft.at(0, 1, 1, 2) == doctest::Approx(30.0 / 255.0));
}

TEST_CASE("manifest save/load/validate round-trip") {
    TempDir dir("manifest");
    auto m = tiny_manifest();
    auto p = dir.path() / "manifest.json";
    io::save_manifest(p, m);
    auto back = io::load_manifest(p);
    CHECK(back.clip_count() == 4);
    CHECK_NOTHROW(io::validate_manifest(back));
    CHECK(back.clips_in_split("train").size() == 2);
    CHECK(back.find_clip("s01c1") != nullptr);
}

TEST_CASE("manifest validator names the violated rule") {
    SUBCASE("split leakage") {
        auto m = tiny_manifest();
        m.subjects[0].clips[1].split = "val"; // subject s00 now in two splits
        CHECK_THROWS_WITH_AS(io::validate_manifest(m),
                             doctest::Contains("split-leakage"), DataError);
    }
    SUBCASE("duplicate clip id") {
        auto m = tiny_manifest();
        m.subjects[1].clips[0].clip_id = m.subjects[0].clips[0].clip_id;
        CHECK_THROWS_WITH_AS(io::validate_manifest(m),
                             doctest::Contains("duplicate-clip-id"), DataError);
    }
    SUBCASE("bad split name") {
        auto m = tiny_manifest();
        m.subjects[0].clips[0].split = "holdout";
        for (auto& c : m.subjects[0].clips) c.split = "holdout";
        CHECK_THROWS_WITH_AS(io::validate_manifest(m), doctest::Contains("bad-split"),
                             DataError);
    }
    SUBCASE("bad labels") {
        auto m = tiny_manifest();
        m.subjects[0].clips[0].spo2_pct.clear();
        CHECK_THROWS_WITH_AS(io::validate_manifest(m), doctest::Contains("bad-labels"),
                             DataError);
    }
}

TEST_CASE("retained flag filters training clips") {
    auto m = tiny_manifest();
    m.subjects[0].clips[0].retained = false;
    CHECK(m.clips_in_split("train", true).size() == 1);
    CHECK(m.clips_in_split("train", false).size() == 2);
}

TEST_CASE("subject-level split assignment partitions cleanly") {
    io::Manifest m;
    for (int s = 0; s < 10; ++s) {
        io::SubjectEntry sub;
        sub.subject_id = "s" + std::to_string(s);
        io::ClipEntry e;
        e.clip_id = sub.subject_id + "c0";
        e.hr_bpm = {100.0};
        e.spo2_pct = {95.0};
        sub.clips.push_back(e);
        m.subjects.push_back(sub);
    }
    io::assign_splits_by_subject(m, 0.7, 0.15, 7);
    CHECK_NOTHROW(io::validate_manifest(m));
    CHECK(m.clips_in_split("train").size() == 7);
    CHECK(!m.clips_in_split("val").empty());
    CHECK(!m.clips_in_split("test").empty());
}
