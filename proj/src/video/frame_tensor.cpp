#include "video/frame_tensor.hpp"

#include <algorithm>
#include <cmath>

namespace pulsekit::video {

double BBox::iou(const BBox& o) const {
    int ix = std::max(x, o.x);
    int iy = std::max(y, o.y);
    int ix2 = std::min(x2(), o.x2());
    int iy2 = std::min(y2(), o.y2());
    double inter = std::max(0, ix2 - ix) * static_cast<double>(std::max(0, iy2 - iy));
    double uni = static_cast<double>(w) * h + static_cast<double>(o.w) * o.h - inter;
    return uni > 0.0 ? inter / uni : 0.0;
}

BBox BBox::rotated90(int quarter_turns, int frame_h, int frame_w) const {
    BBox b = *this;
    int fh = frame_h, fw = frame_w;
    int q = ((quarter_turns % 4) + 4) % 4;
    for (int i = 0; i < q; ++i) {
        // CCW: pixel (y, x) in (fh, fw) -> (fw - 1 - x, y) in (fw, fh).
        BBox r;
        r.x = b.y;
        r.y = fw - b.x - b.w;
        r.w = b.h;
        r.h = b.w;
        b = r;
        std::swap(fh, fw);
    }
    return b;
}

FrameTensor FrameTensor::slice(std::size_t first, std::size_t count) const {
    if (first + count > t_) throw UsageError("frame slice out of range");
    FrameTensor out(count, h_, w_, fps_);
    std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>(first * h_ * w_ * 3),
                count * h_ * w_ * 3, out.data_.begin());
    return out;
}

FrameTensor FrameTensor::rotated90(int quarter_turns) const {
    int q = ((quarter_turns % 4) + 4) % 4;
    if (q == 0) return *this;
    FrameTensor cur = *this;
    for (int i = 0; i < q; ++i) {
        FrameTensor out(cur.t_, cur.w_, cur.h_, fps_);
        for (std::size_t t = 0; t < cur.t_; ++t)
            for (std::size_t y = 0; y < cur.h_; ++y)
                for (std::size_t x = 0; x < cur.w_; ++x)
                    for (std::size_t c = 0; c < 3; ++c)
                        out.at(t, cur.w_ - 1 - x, y, c) = cur.at(t, y, x, c);
        cur = std::move(out);
    }
    return cur;
}

FrameTensor FrameTensor::cropped(const BBox& box) const {
    int x0 = std::clamp(box.x, 0, static_cast<int>(w_));
    int y0 = std::clamp(box.y, 0, static_cast<int>(h_));
    int x1 = std::clamp(box.x2(), 0, static_cast<int>(w_));
    int y1 = std::clamp(box.y2(), 0, static_cast<int>(h_));
    if (x1 <= x0 || y1 <= y0) throw UsageError("crop: empty region");
    FrameTensor out(t_, static_cast<std::size_t>(y1 - y0),
                    static_cast<std::size_t>(x1 - x0), fps_);
    for (std::size_t t = 0; t < t_; ++t)
        for (int y = y0; y < y1; ++y)
            for (int x = x0; x < x1; ++x)
                for (std::size_t c = 0; c < 3; ++c)
                    out.at(t, static_cast<std::size_t>(y - y0),
                           static_cast<std::size_t>(x - x0), c) =
                        at(t, static_cast<std::size_t>(y), static_cast<std::size_t>(x), c);
    return out;
}

FrameTensor FrameTensor::resized_bilinear(std::size_t out_h, std::size_t out_w) const {
    FrameTensor out(t_, out_h, out_w, fps_);
    const double sy = static_cast<double>(h_) / static_cast<double>(out_h);
    const double sx = static_cast<double>(w_) / static_cast<double>(out_w);
    for (std::size_t t = 0; t < t_; ++t) {
        for (std::size_t oy = 0; oy < out_h; ++oy) {
            double fy = (static_cast<double>(oy) + 0.5) * sy - 0.5;
            fy = std::max(0.0, std::min(fy, static_cast<double>(h_ - 1)));
            std::size_t y0 = static_cast<std::size_t>(fy);
            std::size_t y1 = std::min(y0 + 1, h_ - 1);
            double wy = fy - static_cast<double>(y0);
            for (std::size_t ox = 0; ox < out_w; ++ox) {
                double fx = (static_cast<double>(ox) + 0.5) * sx - 0.5;
                fx = std::max(0.0, std::min(fx, static_cast<double>(w_ - 1)));
                std::size_t x0 = static_cast<std::size_t>(fx);
                std::size_t x1 = std::min(x0 + 1, w_ - 1);
                double wx = fx - static_cast<double>(x0);
                for (std::size_t c = 0; c < 3; ++c) {
                    double v00 = at(t, y0, x0, c), v01 = at(t, y0, x1, c);
                    double v10 = at(t, y1, x0, c), v11 = at(t, y1, x1, c);
                    out.at(t, oy, ox, c) = (1 - wy) * ((1 - wx) * v00 + wx * v01) +
                                           wy * ((1 - wx) * v10 + wx * v11);
                }
            }
        }
    }
    return out;
}

FrameTensor FrameTensor::pooled_spatial(std::size_t factor) const {
    if (factor == 0 || h_ % factor != 0 || w_ % factor != 0)
        throw UsageError("pooled_spatial: size must divide evenly");
    FrameTensor out(t_, h_ / factor, w_ / factor, fps_);
    const double inv = 1.0 / static_cast<double>(factor * factor);
    for (std::size_t t = 0; t < t_; ++t)
        for (std::size_t oy = 0; oy < out.height(); ++oy)
            for (std::size_t ox = 0; ox < out.width(); ++ox)
                for (std::size_t c = 0; c < 3; ++c) {
                    double s = 0.0;
                    for (std::size_t dy = 0; dy < factor; ++dy)
                        for (std::size_t dx = 0; dx < factor; ++dx)
                            s += at(t, oy * factor + dy, ox * factor + dx, c);
                    out.at(t, oy, ox, c) = s * inv;
                }
    return out;
}

bool FrameTensor::all_finite() const {
    for (double v : data_)
        if (!std::isfinite(v)) return false;
    return true;
}

} // namespace pulsekit::video
