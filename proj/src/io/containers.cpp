#include "io/containers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

namespace pulsekit::io {

namespace {

constexpr uint16_t kFrameVersion = 1;
constexpr uint16_t kWaveVersion = 1;

class Writer {
public:
    explicit Writer(const std::filesystem::path& path) : out_(path, std::ios::binary) {
        if (!out_) throw DataError("cannot open for write: " + path.string());
        path_ = path.string();
    }
    void bytes(const void* p, std::size_t n) {
        out_.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
    }
    template <typename T>
    void pod(T v) {
        bytes(&v, sizeof v); // little-endian hosts only, which we target
    }
    void finish() {
        out_.flush();
        if (!out_) throw DataError("write failed: " + path_);
    }

private:
    std::ofstream out_;
    std::string path_;
};

class Reader {
public:
    explicit Reader(const std::filesystem::path& path) : in_(path, std::ios::binary) {
        if (!in_) throw DataError("cannot open for read: " + path.string());
        path_ = path.string();
    }
    void bytes(void* p, std::size_t n) {
        in_.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
        if (static_cast<std::size_t>(in_.gcount()) != n)
            throw DataError("truncated file at byte " + std::to_string(offset_) + ": " + path_);
        offset_ += n;
    }
    template <typename T>
    T pod() {
        T v;
        bytes(&v, sizeof v);
        return v;
    }
    void expect_eof() {
        char c;
        in_.read(&c, 1);
        if (!in_.eof())
            throw DataError("trailing garbage at byte " + std::to_string(offset_) + ": " + path_);
    }
    std::size_t offset() const { return offset_; }
    const std::string& path() const { return path_; }

private:
    std::ifstream in_;
    std::string path_;
    std::size_t offset_ = 0;
};

void check_magic(Reader& r, const char expect[4]) {
    char m[4];
    r.bytes(m, 4);
    if (std::memcmp(m, expect, 4) != 0)
        throw DataError("bad magic at byte 0: " + r.path());
}

} // namespace

void write_frames(const std::filesystem::path& path, const video::FrameTensor& ft) {
    Writer w(path);
    w.bytes("PFVF", 4);
    w.pod<uint16_t>(kFrameVersion);
    w.pod<uint32_t>(static_cast<uint32_t>(ft.frames()));
    w.pod<uint32_t>(static_cast<uint32_t>(ft.height()));
    w.pod<uint32_t>(static_cast<uint32_t>(ft.width()));
    w.pod<uint32_t>(3);
    w.pod<float>(static_cast<float>(ft.fps()));
    std::vector<uint8_t> payload(ft.data().size());
    for (std::size_t i = 0; i < payload.size(); ++i) {
        double v = std::clamp(ft.data()[i], 0.0, 1.0);
        payload[i] = static_cast<uint8_t>(std::lround(v * 255.0));
    }
    w.bytes(payload.data(), payload.size());
    w.finish();
}

video::FrameTensor read_frames(const std::filesystem::path& path) {
    Reader r(path);
    check_magic(r, "PFVF");
    auto version = r.pod<uint16_t>();
    if (version != kFrameVersion)
        throw DataError("unsupported PFVF version " + std::to_string(version) + ": " +
                        path.string());
    auto t = r.pod<uint32_t>();
    auto h = r.pod<uint32_t>();
    auto wd = r.pod<uint32_t>();
    auto c = r.pod<uint32_t>();
    auto fps = r.pod<float>();
    if (c != 3) throw DataError("PFVF: only 3-channel payloads supported");
    if (t == 0 || h == 0 || wd == 0) throw DataError("PFVF: empty dimensions");
    video::FrameTensor ft(t, h, wd, static_cast<double>(fps));
    std::vector<uint8_t> payload(ft.data().size());
    r.bytes(payload.data(), payload.size());
    r.expect_eof();
    for (std::size_t i = 0; i < payload.size(); ++i)
        ft.data()[i] = static_cast<double>(payload[i]) / 255.0;
    return ft;
}

void write_wave(const std::filesystem::path& path, const signal::Waveform& w) {
    Writer out(path);
    out.bytes("PFWV", 4);
    out.pod<uint16_t>(kWaveVersion);
    out.pod<double>(w.sample_rate_hz());
    out.pod<uint64_t>(w.size());
    out.bytes(w.samples().data(), w.size() * sizeof(double));
    std::vector<uint8_t> bits((w.size() + 7) / 8, 0);
    for (std::size_t i = 0; i < w.size(); ++i)
        if (w.mask()[i]) bits[i / 8] |= static_cast<uint8_t>(1u << (i % 8));
    out.bytes(bits.data(), bits.size());
    out.finish();
}

signal::Waveform read_wave(const std::filesystem::path& path) {
    Reader r(path);
    check_magic(r, "PFWV");
    auto version = r.pod<uint16_t>();
    if (version != kWaveVersion)
        throw DataError("unsupported PFWV version " + std::to_string(version) + ": " +
                        path.string());
    auto rate = r.pod<double>();
    auto n = r.pod<uint64_t>();
    if (n == 0) throw DataError("PFWV: empty waveform");
    std::vector<double> samples(n);
    r.bytes(samples.data(), n * sizeof(double));
    std::vector<uint8_t> bits((n + 7) / 8);
    r.bytes(bits.data(), bits.size());
    r.expect_eof();
    std::vector<bool> mask(n);
    for (std::size_t i = 0; i < n; ++i)
        mask[i] = (bits[i / 8] >> (i % 8)) & 1u;
    return signal::Waveform(std::move(samples), rate, std::move(mask));
}

void write_wave_csv(const std::filesystem::path& path, const signal::Waveform& w) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open for write: " + path.string());
    out << "t_seconds,value,quality\n";
    out.precision(17);
    for (std::size_t i = 0; i < w.size(); ++i)
        out << static_cast<double>(i) / w.sample_rate_hz() << ',' << w.samples()[i]
            << ',' << (w.mask()[i] ? 1 : 0) << '\n';
    if (!out) throw DataError("write failed: " + path.string());
}

signal::Waveform read_wave_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open for read: " + path.string());
    std::string line;
    if (!std::getline(in, line) || line.rfind("t_seconds,value,quality", 0) != 0)
        throw DataError("bad CSV header: " + path.string());
    std::vector<double> t, v;
    std::vector<bool> q;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string a, b, c;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c))
            throw DataError("bad CSV row: " + path.string());
        t.push_back(std::stod(a));
        v.push_back(std::stod(b));
        q.push_back(std::stoi(c) != 0);
    }
    if (v.size() < 2) throw DataError("CSV waveform needs at least 2 samples: " + path.string());
    double dt = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
    if (!(dt > 0)) throw DataError("CSV timestamps not increasing: " + path.string());
    return signal::Waveform(std::move(v), 1.0 / dt, std::move(q));
}

video::FrameTensor read_ppm(const std::filesystem::path& path, double fps) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open for read: " + path.string());
    std::string magic;
    in >> magic;
    if (magic != "P6") throw DataError("not a binary PPM: " + path.string());
    auto next_token = [&in, &path]() {
        std::string tok;
        for (;;) {
            if (!(in >> tok)) throw DataError("truncated PPM header: " + path.string());
            if (tok[0] == '#') {
                std::string rest;
                std::getline(in, rest);
                continue;
            }
            return tok;
        }
    };
    int w = std::stoi(next_token());
    int h = std::stoi(next_token());
    int maxval = std::stoi(next_token());
    if (w <= 0 || h <= 0 || maxval != 255)
        throw DataError("unsupported PPM geometry: " + path.string());
    in.get(); // single whitespace after maxval
    std::vector<uint8_t> payload(static_cast<std::size_t>(w) * h * 3);
    in.read(reinterpret_cast<char*>(payload.data()),
            static_cast<std::streamsize>(payload.size()));
    if (static_cast<std::size_t>(in.gcount()) != payload.size())
        throw DataError("truncated PPM payload: " + path.string());
    video::FrameTensor ft(1, static_cast<std::size_t>(h), static_cast<std::size_t>(w), fps);
    for (std::size_t i = 0; i < payload.size(); ++i)
        ft.data()[i] = static_cast<double>(payload[i]) / 255.0;
    return ft;
}

} // namespace pulsekit::io
