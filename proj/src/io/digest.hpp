#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "common/error.hpp"

namespace pulsekit::io {

// FNV-1a, 64-bit. Used for stage caching and checkpoint config digests.
class Digest {
public:
    Digest& update(const void* data, std::size_t n) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < n; ++i) {
            h_ ^= p[i];
            h_ *= 0x100000001b3ull;
        }
        return *this;
    }
    Digest& update(std::string_view s) { return update(s.data(), s.size()); }
    uint64_t value() const { return h_; }
    std::string hex() const {
        static const char* digits = "0123456789abcdef";
        std::string out(16, '0');
        uint64_t v = h_;
        for (int i = 15; i >= 0; --i) {
            out[static_cast<std::size_t>(i)] = digits[v & 0xf];
            v >>= 4;
        }
        return out;
    }

private:
    uint64_t h_ = 0xcbf29ce484222325ull;
};

inline uint64_t digest_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open for digest: " + path.string());
    Digest d;
    char buf[1 << 16];
    while (in.read(buf, sizeof buf) || in.gcount() > 0)
        d.update(buf, static_cast<std::size_t>(in.gcount()));
    return d.value();
}

} // namespace pulsekit::io
