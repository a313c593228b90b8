#include "video/detector.hpp"

#include <algorithm>
#include <cmath>

namespace pulsekit::video {

std::optional<BBox> MarkerFaceDetector::detect(const FrameView& frame) const {
    const auto& p = params_;
    long sx0 = -1, sy0 = -1, sx1 = -1, sy1 = -1;
    std::size_t n_skin = 0;
    double marker_cy = 0.0;
    long mx0 = -1, my0 = -1, mx1 = -1, my1 = -1;
    std::size_t n_marker = 0;

    for (std::size_t y = 0; y < frame.h; ++y) {
        for (std::size_t x = 0; x < frame.w; ++x) {
            double r = frame.at(y, x, 0), g = frame.at(y, x, 1), b = frame.at(y, x, 2);
            bool skin = std::abs(r - p.skin_r) < p.color_window &&
                        std::abs(g - p.skin_g) < p.color_window &&
                        std::abs(b - p.skin_b) < p.color_window && r > g && g > b;
            bool marker = r < p.marker_max_level && g < p.marker_max_level &&
                          b < p.marker_max_level;
            if (skin) {
                ++n_skin;
                if (sx0 < 0) {
                    sx0 = sx1 = static_cast<long>(x);
                    sy0 = sy1 = static_cast<long>(y);
                } else {
                    sx0 = std::min(sx0, static_cast<long>(x));
                    sx1 = std::max(sx1, static_cast<long>(x));
                    sy0 = std::min(sy0, static_cast<long>(y));
                    sy1 = std::max(sy1, static_cast<long>(y));
                }
            } else if (marker) {
                ++n_marker;
                marker_cy += static_cast<double>(y);
                if (mx0 < 0) {
                    mx0 = mx1 = static_cast<long>(x);
                    my0 = my1 = static_cast<long>(y);
                } else {
                    mx0 = std::min(mx0, static_cast<long>(x));
                    mx1 = std::max(mx1, static_cast<long>(x));
                    my0 = std::min(my0, static_cast<long>(y));
                    my1 = std::max(my1, static_cast<long>(y));
                }
            }
        }
    }

    if (n_skin < p.min_skin_pixels || n_marker < p.min_marker_pixels) return std::nullopt;

    long x0 = std::min(sx0, mx0), y0 = std::min(sy0, my0);
    long x1 = std::max(sx1, mx1), y1 = std::max(sy1, my1);
    marker_cy /= static_cast<double>(n_marker);

    // Orientation gate: the marker must sit in the top band of the face box.
    double rel = (marker_cy - static_cast<double>(y0)) /
                 std::max(1.0, static_cast<double>(y1 - y0));
    if (rel > p.marker_top_fraction) return std::nullopt;

    BBox box;
    box.x = static_cast<int>(x0);
    box.y = static_cast<int>(y0);
    box.w = static_cast<int>(x1 - x0 + 1);
    box.h = static_cast<int>(y1 - y0 + 1);
    box.x = std::max(0, box.x);
    box.y = std::max(0, box.y);
    box.w = std::min(box.w, static_cast<int>(frame.w) - box.x);
    box.h = std::min(box.h, static_cast<int>(frame.h) - box.y);
    return box;
}

} // namespace pulsekit::video
