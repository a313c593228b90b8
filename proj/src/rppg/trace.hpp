#pragma once

#include <array>
#include <vector>

#include "common/error.hpp"
#include "video/frame_tensor.hpp"

namespace pulsekit::rppg {

// Spatial mean RGB of the face crop, one row per frame.
struct RoiTrace {
    std::vector<std::array<double, 3>> mean_rgb;
    double fps = 30.0;

    std::size_t length() const { return mean_rgb.size(); }
};

inline RoiTrace trace_from_clip(const video::FrameTensor& clip) {
    RoiTrace tr;
    tr.fps = clip.fps();
    tr.mean_rgb.resize(clip.frames());
    const std::size_t hw = clip.height() * clip.width();
    for (std::size_t t = 0; t < clip.frames(); ++t) {
        const double* p = clip.frame_ptr(t);
        double acc[3] = {0.0, 0.0, 0.0};
        for (std::size_t i = 0; i < hw; ++i) {
            acc[0] += p[i * 3];
            acc[1] += p[i * 3 + 1];
            acc[2] += p[i * 3 + 2];
        }
        for (int c = 0; c < 3; ++c)
            tr.mean_rgb[t][static_cast<std::size_t>(c)] = acc[c] / static_cast<double>(hw);
    }
    return tr;
}

} // namespace pulsekit::rppg
