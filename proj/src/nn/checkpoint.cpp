#include "nn/checkpoint.hpp"

#include <cstring>
#include <fstream>

namespace pulsekit::nn {

namespace {
constexpr uint16_t kVersion = 1;
}

void save_checkpoint(const std::filesystem::path& path, const PhysNet& model,
                     uint64_t config_digest) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open checkpoint for write: " + path.string());
    auto put = [&out](const void* p, std::size_t n) {
        out.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
    };
    put("PFCK", 4);
    put(&kVersion, 2);
    put(&config_digest, 8);
    auto count = static_cast<uint32_t>(model.parameters().size());
    put(&count, 4);
    for (const auto& p : model.parameters()) {
        auto name_len = static_cast<uint16_t>(p.name.size());
        put(&name_len, 2);
        put(p.name.data(), p.name.size());
        auto ndim = static_cast<uint32_t>(p.tensor.shape().size());
        put(&ndim, 4);
        for (int64_t d : p.tensor.shape()) put(&d, 8);
        put(p.tensor.values().data(), p.tensor.values().size() * sizeof(double));
    }
    out.flush();
    if (!out) throw DataError("checkpoint write failed: " + path.string());
}

uint64_t load_checkpoint(const std::filesystem::path& path, PhysNet& model) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open checkpoint: " + path.string());
    std::size_t offset = 0;
    auto get = [&in, &offset, &path](void* p, std::size_t n) {
        in.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
        if (static_cast<std::size_t>(in.gcount()) != n)
            throw DataError("truncated checkpoint at byte " + std::to_string(offset) + ": " +
                            path.string());
        offset += n;
    };
    char magic[4];
    get(magic, 4);
    if (std::memcmp(magic, "PFCK", 4) != 0)
        throw DataError("bad checkpoint magic: " + path.string());
    uint16_t version;
    get(&version, 2);
    if (version != kVersion)
        throw DataError("unsupported checkpoint version " + std::to_string(version));
    uint64_t digest;
    get(&digest, 8);
    uint32_t count;
    get(&count, 4);
    if (count != model.parameters().size())
        throw DataError("checkpoint parameter count mismatch: " + path.string());

    for (auto& p : model.parameters()) {
        uint16_t name_len;
        get(&name_len, 2);
        std::string name(name_len, '\0');
        get(name.data(), name_len);
        if (name != p.name)
            throw DataError("checkpoint parameter order mismatch: expected " + p.name +
                            ", found " + name);
        uint32_t ndim;
        get(&ndim, 4);
        std::vector<int64_t> dims(ndim);
        for (auto& d : dims) get(&d, 8);
        if (dims != p.tensor.shape())
            throw DataError("checkpoint shape mismatch for " + name);
        get(p.tensor.values().data(), p.tensor.values().size() * sizeof(double));
    }
    char extra;
    in.read(&extra, 1);
    if (!in.eof()) throw DataError("trailing garbage in checkpoint: " + path.string());
    return digest;
}

} // namespace pulsekit::nn
