#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "video/detector.hpp"
#include "video/frame_tensor.hpp"

namespace pulsekit::video {

inline constexpr std::size_t kClipFrames = 60; // two seconds at 30 fps
inline constexpr std::size_t kRetryStep = 30;  // advance on detection failure

// Non-overlapping 60-frame clips; a trailing remainder is discarded. Videos
// not at 30 fps are first retimed by nearest-frame selection.
std::vector<FrameTensor> segment_clips(const FrameTensor& video);

struct AlignmentState {
    std::optional<BBox> current_bbox;
    int current_rotation_deg = 0; // one of 0/90/180/270
    std::size_t frames_consumed = 0;
    int rotations_tried_last = 0; // 90-degree steps applied before success
    int detector_calls = 0;
};

struct AlignedClip {
    FrameTensor frames; // 60 x out_size x out_size
    BBox bbox;          // in upright (rotation-corrected) coordinates
    int rotation_deg = 0;
};

struct SkipRecord {
    std::string clip_id;
    std::string reason;
    std::size_t frame_offset = 0;
};

// Detection succeeded midway through the clip: the caller should rebuild the
// window starting at `frame_offset` of the original stream.
struct RetryAt {
    std::size_t frame_offset;
};

struct ClipSkipped {};

using AlignOutcome = std::variant<AlignedClip, RetryAt, ClipSkipped>;

// Rotation-search alignment of one 60-frame clip. Tries the state's last
// successful rotation first, then the remaining bins in ascending order; on
// total failure at frame 0 the anchor advances by 30 frames. The found box is
// applied to all frames of the clip, cropped and resized to out_size.
AlignOutcome align_clip(const FrameTensor& clip, const FaceDetector& detector,
                        AlignmentState& state, std::size_t out_size = 128);

struct AlignedVideo {
    std::vector<AlignedClip> clips;
    std::vector<std::size_t> clip_start_frames;
    std::vector<SkipRecord> skips;
};

// Stream-level driver: walks the video, realigning the window start to the
// recovery frame after failed anchors.
AlignedVideo align_video(const FrameTensor& video, const FaceDetector& detector,
                         const std::string& clip_id_prefix, std::size_t out_size = 128);

// Consecutive frame differences scaled by their global standard deviation
// (+1e-7). Output has T-1 frames.
FrameTensor diff_normalize(const FrameTensor& clip);

FrameTensor time_reverse(const FrameTensor& clip);

} // namespace pulsekit::video
