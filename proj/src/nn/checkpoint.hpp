#pragma once

#include <filesystem>

#include "nn/physnet.hpp"

namespace pulsekit::nn {

// Versioned binary checkpoint, magic "PFCK": u16 version, u64 config digest,
// u32 parameter count, then per parameter: u16 name length + name bytes,
// u32 ndim, i64 dims, little-endian f64 data. Round-trips bit-exactly.
void save_checkpoint(const std::filesystem::path& path, const PhysNet& model,
                     uint64_t config_digest);

// Loads into an existing model; names and shapes must match exactly.
// Returns the stored config digest.
uint64_t load_checkpoint(const std::filesystem::path& path, PhysNet& model);

} // namespace pulsekit::nn
