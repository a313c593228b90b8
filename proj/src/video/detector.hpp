#pragma once

#include <optional>

#include "video/frame_tensor.hpp"

namespace pulsekit::video {

// Pluggable face localizer. Real deployments wrap an external detector; the
// synthetic pipeline uses MarkerFaceDetector below. Detections must lie
// within frame bounds and fail (nullopt) on non-upright faces so the
// rotation search has a signal to work with.
class FaceDetector {
public:
    virtual ~FaceDetector() = default;
    virtual std::optional<BBox> detect(const FrameView& frame) const = 0;
};

// Detector for the synthetic corpus: finds the skin-colored blob and accepts
// it only when the high-contrast forehead marker sits in the top band of the
// blob, which makes 90-degree mis-orientations detectable.
class MarkerFaceDetector : public FaceDetector {
public:
    struct Params {
        double skin_r = 0.70, skin_g = 0.55, skin_b = 0.42;
        double color_window = 0.16;   // per-channel tolerance around skin tone
        double marker_max_level = 0.15;
        std::size_t min_skin_pixels = 64;
        std::size_t min_marker_pixels = 8;
        double marker_top_fraction = 0.35;
    };

    MarkerFaceDetector() = default;
    explicit MarkerFaceDetector(const Params& p) : params_(p) {}

    std::optional<BBox> detect(const FrameView& frame) const override;

private:
    Params params_;
};

} // namespace pulsekit::video
