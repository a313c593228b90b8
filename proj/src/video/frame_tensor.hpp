#pragma once

#include <cstddef>
#include <vector>

#include "common/error.hpp"

namespace pulsekit::video {

struct BBox {
    int x = 0, y = 0, w = 0, h = 0;

    int x2() const { return x + w; }
    int y2() const { return y + h; }
    double iou(const BBox& o) const;

    // Coordinates after rotating the containing (height, width) frame
    // counter-clockwise by quarter_turns * 90 degrees.
    BBox rotated90(int quarter_turns, int frame_h, int frame_w) const;
};

// T x H x W x 3 video tensor, frame-major, row-major RGB within a frame.
// Source video values live in [0, 1]; derived tensors (frame differences)
// are only required to stay finite.
class FrameTensor {
public:
    FrameTensor() = default;
    FrameTensor(std::size_t t, std::size_t h, std::size_t w, double fps)
        : t_(t), h_(h), w_(w), fps_(fps), data_(t * h * w * 3, 0.0) {
        if (!(fps > 0.0)) throw UsageError("frame tensor: fps must be > 0");
    }

    std::size_t frames() const { return t_; }
    std::size_t height() const { return h_; }
    std::size_t width() const { return w_; }
    double fps() const { return fps_; }
    void set_fps(double fps) { fps_ = fps; }

    double& at(std::size_t t, std::size_t y, std::size_t x, std::size_t c) {
        return data_[((t * h_ + y) * w_ + x) * 3 + c];
    }
    double at(std::size_t t, std::size_t y, std::size_t x, std::size_t c) const {
        return data_[((t * h_ + y) * w_ + x) * 3 + c];
    }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    const double* frame_ptr(std::size_t t) const { return data_.data() + t * h_ * w_ * 3; }

    // Frame range [first, first + count) as a standalone tensor.
    FrameTensor slice(std::size_t first, std::size_t count) const;

    // Whole-tensor rotation, counter-clockwise, exact (no interpolation).
    FrameTensor rotated90(int quarter_turns) const;

    FrameTensor cropped(const BBox& box) const;

    FrameTensor resized_bilinear(std::size_t out_h, std::size_t out_w) const;

    // Box-average pooling; requires exact divisibility.
    FrameTensor pooled_spatial(std::size_t factor) const;

    bool all_finite() const;

private:
    std::size_t t_ = 0, h_ = 0, w_ = 0;
    double fps_ = 30.0;
    std::vector<double> data_;
};

// Per-frame read-only view used by detectors.
struct FrameView {
    const double* data = nullptr;
    std::size_t h = 0, w = 0;

    double at(std::size_t y, std::size_t x, std::size_t c) const {
        return data[(y * w + x) * 3 + c];
    }
};

inline FrameView view_frame(const FrameTensor& ft, std::size_t t) {
    return FrameView{ft.frame_ptr(t), ft.height(), ft.width()};
}

} // namespace pulsekit::video
