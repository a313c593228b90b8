#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nn/lds.hpp"
#include "nn/losses.hpp"
#include "nn/optimizer.hpp"
#include "nn/physnet.hpp"
#include "signal/waveform.hpp"
#include "video/frame_tensor.hpp"

namespace pulsekit::nn {

struct ClipSample {
    std::string clip_id;
    Tensor input;                    // [3, T, hw, hw], constant
    std::vector<double> target_wave; // reference pulse, one sample per frame
    double hr_label_bpm = 0.0;
    double spo2_label_pct = 0.0;
};

// Aligned 128x128 clip -> model input: spatial box-average to hw, frame
// difference normalization, zero frame prepended to keep T samples.
Tensor prepare_clip_input(const video::FrameTensor& aligned, int64_t hw);

// Time-reversal augmentation on a prepared input: differences of the
// reversed clip are the negated, reversed differences of the original.
Tensor reverse_prepared_input(const Tensor& input);

struct TrainConfig {
    int epochs = 27;
    double init_lr = 0.01;
    int batch_size = 4;
    double momentum = 0.9;
    bool one_cycle = true;
    int freeze_encoder_blocks = 0;
    bool augment_time_reversal = false;
    bool use_lds_weights = true; // saturation path only
    double grad_clip_norm = 5.0; // 0 disables clipping
    uint64_t seed = 7;
    std::size_t max_train_clips = 0; // 0 = use every training clip
};

struct EpochStats {
    double train_loss = 0.0;
    double val_loss = 0.0;
};

struct TrainResult {
    std::vector<EpochStats> history;
    double final_val_loss() const {
        return history.empty() ? 0.0 : history.back().val_loss;
    }
};

// Pulse-waveform training with the negative Pearson loss.
TrainResult train_hr(PhysNet& model, const std::vector<ClipSample>& train,
                     const std::vector<ClipSample>& val, const TrainConfig& cfg);

// Saturation training with (optionally LDS-weighted) RMSE and optional
// time-reversal augmentation. Validation loss is the plain RMSE.
TrainResult train_spo2(PhysNet& model, const std::vector<ClipSample>& train,
                       const std::vector<ClipSample>& val, const TrainConfig& cfg);

signal::Waveform predict_rppg(const PhysNet& model, const Tensor& input, double fps = 30.0);
double predict_spo2(const PhysNet& model, const Tensor& input);

} // namespace pulsekit::nn
