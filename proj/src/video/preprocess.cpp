#include "video/preprocess.hpp"

#include <cmath>

namespace pulsekit::video {

namespace {

FrameTensor retime_nearest(const FrameTensor& video, double target_fps) {
    const double ratio = video.fps() / target_fps;
    const auto n = static_cast<std::size_t>(
        std::floor(static_cast<double>(video.frames()) / ratio));
    FrameTensor out(n, video.height(), video.width(), target_fps);
    for (std::size_t t = 0; t < n; ++t) {
        auto src = static_cast<std::size_t>(std::lround(static_cast<double>(t) * ratio));
        if (src >= video.frames()) src = video.frames() - 1;
        std::copy_n(video.frame_ptr(src), video.height() * video.width() * 3,
                    out.data().begin() +
                        static_cast<std::ptrdiff_t>(t * video.height() * video.width() * 3));
    }
    return out;
}

} // namespace

std::vector<FrameTensor> segment_clips(const FrameTensor& video) {
    const FrameTensor* src = &video;
    FrameTensor retimed;
    if (std::abs(video.fps() - 30.0) > 1e-9) {
        retimed = retime_nearest(video, 30.0);
        src = &retimed;
    }
    std::vector<FrameTensor> clips;
    const std::size_t n = src->frames() / kClipFrames;
    clips.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        clips.push_back(src->slice(i * kClipFrames, kClipFrames));
    return clips;
}

namespace {

// Rotation bins to try: last successful first, then the rest ascending.
std::vector<int> rotation_order(int last_deg) {
    std::vector<int> order{last_deg};
    for (int r = 0; r < 360; r += 90)
        if (r != last_deg) order.push_back(r);
    return order;
}

std::optional<std::pair<BBox, int>> detect_with_rotations(const FrameTensor& clip,
                                                          std::size_t frame_index,
                                                          const FaceDetector& detector,
                                                          AlignmentState& state) {
    for (int deg : rotation_order(state.current_rotation_deg)) {
        FrameTensor frame = clip.slice(frame_index, 1).rotated90(deg / 90);
        ++state.detector_calls;
        if (auto box = detector.detect(view_frame(frame, 0))) {
            state.rotations_tried_last = deg / 90;
            return std::make_pair(*box, deg);
        }
    }
    return std::nullopt;
}

} // namespace

AlignOutcome align_clip(const FrameTensor& clip, const FaceDetector& detector,
                        AlignmentState& state, std::size_t out_size) {
    if (clip.frames() != kClipFrames)
        throw UsageError("align_clip: expected a 60-frame clip");

    auto hit = detect_with_rotations(clip, 0, detector, state);
    if (!hit) {
        // Advance by 30 frames and retry. If the detector fires there the
        // caller restarts the window at that frame; otherwise the clip is
        // unusable.
        auto retry = detect_with_rotations(clip, kRetryStep, detector, state);
        state.frames_consumed += kRetryStep;
        if (retry) return RetryAt{kRetryStep};
        state.frames_consumed += clip.frames() - kRetryStep;
        return ClipSkipped{};
    }

    auto [box, deg] = *hit;
    state.current_bbox = box;
    state.current_rotation_deg = deg;
    state.frames_consumed += clip.frames();

    // One box for the whole clip: rotate all frames, crop, resize.
    FrameTensor upright = clip.rotated90(deg / 90);
    AlignedClip out;
    out.frames = upright.cropped(box).resized_bilinear(out_size, out_size);
    out.bbox = box;
    out.rotation_deg = deg;
    return out;
}

AlignedVideo align_video(const FrameTensor& video, const FaceDetector& detector,
                         const std::string& clip_id_prefix, std::size_t out_size) {
    AlignedVideo result;
    AlignmentState state;
    std::size_t pos = 0;
    std::size_t index = 0;
    while (pos + kClipFrames <= video.frames()) {
        FrameTensor clip = video.slice(pos, kClipFrames);
        AlignOutcome outcome = align_clip(clip, detector, state, out_size);
        if (std::holds_alternative<AlignedClip>(outcome)) {
            result.clips.push_back(std::get<AlignedClip>(std::move(outcome)));
            result.clip_start_frames.push_back(pos);
            pos += kClipFrames;
            ++index;
        } else if (std::holds_alternative<RetryAt>(outcome)) {
            std::size_t off = std::get<RetryAt>(outcome).frame_offset;
            result.skips.push_back({clip_id_prefix + "#" + std::to_string(index),
                                    "no-detection", pos});
            pos += off; // realign the window start to the recovery frame
        } else {
            result.skips.push_back({clip_id_prefix + "#" + std::to_string(index),
                                    "no-detection", pos});
            pos += kClipFrames;
        }
    }
    return result;
}

FrameTensor diff_normalize(const FrameTensor& clip) {
    if (clip.frames() < 2) throw UsageError("diff_normalize: need at least 2 frames");
    const std::size_t per_frame = clip.height() * clip.width() * 3;
    FrameTensor out(clip.frames() - 1, clip.height(), clip.width(), clip.fps());

    double sum = 0.0, sum2 = 0.0;
    const double* d = clip.data().data();
    double* o = out.data().data();
    const std::size_t n = out.frames() * per_frame;
    for (std::size_t t = 0; t < out.frames(); ++t) {
        const double* a = d + t * per_frame;
        const double* b = a + per_frame;
        double* dst = o + t * per_frame;
        for (std::size_t i = 0; i < per_frame; ++i) {
            double v = b[i] - a[i];
            dst[i] = v;
            sum += v;
            sum2 += v * v;
        }
    }
    const double dn = static_cast<double>(n);
    double var = sum2 / dn - (sum / dn) * (sum / dn);
    double sd = std::sqrt(std::max(0.0, var));
    const double scale = 1.0 / (sd + 1e-7);
    for (std::size_t i = 0; i < n; ++i) o[i] *= scale;
    return out;
}

FrameTensor time_reverse(const FrameTensor& clip) {
    FrameTensor out(clip.frames(), clip.height(), clip.width(), clip.fps());
    const std::size_t per_frame = clip.height() * clip.width() * 3;
    for (std::size_t t = 0; t < clip.frames(); ++t)
        std::copy_n(clip.frame_ptr(t), per_frame,
                    out.data().begin() +
                        static_cast<std::ptrdiff_t>((clip.frames() - 1 - t) * per_frame));
    return out;
}

} // namespace pulsekit::video
