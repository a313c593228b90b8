#pragma once

#include <filesystem>

#include "signal/waveform.hpp"
#include "video/frame_tensor.hpp"

namespace pulsekit::io {

// Binary frame container, magic "PFVF": u16 version, u32 T/H/W/C, f32 fps,
// then T*H*W*C bytes of row-major u8 RGB. Values quantize as round(v * 255).
void write_frames(const std::filesystem::path& path, const video::FrameTensor& ft);
video::FrameTensor read_frames(const std::filesystem::path& path);

// Binary waveform container, magic "PFWV": u16 version, f64 sample_rate,
// u64 n, n f64 samples, then the quality mask packed LSB-first.
void write_wave(const std::filesystem::path& path, const signal::Waveform& w);
signal::Waveform read_wave(const std::filesystem::path& path);

// CSV flavour: header "t_seconds,value,quality", one row per sample.
void write_wave_csv(const std::filesystem::path& path, const signal::Waveform& w);
signal::Waveform read_wave_csv(const std::filesystem::path& path);

// Single binary PPM (P6, maxval 255) as a one-frame tensor; directories of
// numbered PPM frames can be assembled by the caller.
video::FrameTensor read_ppm(const std::filesystem::path& path, double fps = 30.0);

} // namespace pulsekit::io
