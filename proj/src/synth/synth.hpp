#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "io/manifest.hpp"
#include "rppg/trace.hpp"
#include "signal/waveform.hpp"
#include "video/frame_tensor.hpp"

namespace pulsekit::synth {

struct SynthConfig {
    uint64_t seed = 7;
    int n_subjects = 20;
    int clips_per_subject = 3;  // recordings per subject
    double clip_seconds = 8.0;  // per recording; 2 s windows are cut later
    double fps = 30.0;
    int frame_h = 96, frame_w = 96;
    double hr_min_bpm = 79.0, hr_max_bpm = 174.0;
    double spo2_min_pct = 87.0, spo2_max_pct = 99.0;
    double artifact_rate = 0.0;
    std::vector<int> rotation_bins{0, 90, 180, 270};
    double illumination_drift_amp = 0.05;

    // Photometric model. Pulse rides on the skin tone as per-channel AC/DC
    // fractions with the green-dominant signature classical extractors
    // expect; the red/blue ratio encodes SpO2 (ratio-of-ratios).
    double green_ac = 0.040;
    double blue_ac = 0.022;
    double shot_noise_sigma = 0.0012; // "clean": >= 10x below pixel pulse amp

    double ppg_rate_hz = 60.0;
    double train_frac = 0.70, val_frac = 0.15;

    void validate() const;
    SynthConfig hard_preset() const {
        SynthConfig c = *this;
        c.shot_noise_sigma = 0.020; // pulse amplitude ~ 1x noise
        return c;
    }
};

// Ratio-of-ratios law used by the generator: S = 110 - 25 * R where
// R = (AC_red/DC_red) / (AC_blue/DC_blue).
inline double ratio_for_spo2(double spo2_pct) { return (110.0 - spo2_pct) / 25.0; }
inline double spo2_for_ratio(double ratio) { return 110.0 - 25.0 * ratio; }

struct SynthClip {
    std::string subject_id;
    std::string recording_id;
    video::FrameTensor frames;  // stored at orientation_deg
    signal::Waveform ppg_ref;   // ppg_rate_hz
    std::vector<double> hr_series_bpm;    // one label per 2 s window
    std::vector<double> spo2_series_pct;
    video::BBox true_bbox;      // in stored-frame coordinates
    int orientation_deg = 0;
    std::vector<std::pair<double, double>> corruption_s; // injected artifact spans
};

SynthClip generate_recording(const SynthConfig& cfg, int subject, int recording);

// Writes raw frame containers, reference PPG and the manifest under out_dir,
// plus truth.json with generator ground truth (orientation, bbox, artifact
// spans). Deterministic for a given config.
io::Manifest generate_corpus(const SynthConfig& cfg, const std::filesystem::path& out_dir);

struct CorruptionResult {
    signal::Waveform wave;
    std::vector<std::pair<double, double>> intervals_s; // merged, ascending
    double corrupted_fraction = 0.0;
};

// Replaces randomly placed 0.5-20 s spans with noise bursts, baseline
// jump-and-wander segments or flat-lines until ~rate of the signal is
// corrupted. The quality mask is left untouched; screening has to find them.
CorruptionResult inject_artifacts(const signal::Waveform& w, double rate, uint64_t seed);

// Closed-form chrominance decoder, the learnability oracle: recovers SpO2
// via band-passed AC over DC per channel. The trace must cover skin pixels
// only; background dilutes the channels unevenly and biases the ratio.
double decode_spo2_from_trace(const rppg::RoiTrace& trace);

// Convenience wrapper: masks skin-colored pixels on frame 0, averages them
// per frame and decodes.
double decode_spo2_from_clip(const video::FrameTensor& clip);

} // namespace pulsekit::synth
