#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nn/ops.hpp"

namespace pulsekit::nn {

// Spatiotemporal encoder-decoder for pulse extraction, optionally with a
// regression head for saturation. Input is a diff-normalized clip
// [3, T, H, W]; the waveform head returns T samples.
//
// Encoder: four conv3d+ReLU blocks with 2x2 spatial pooling; blocks 2 and 3
// also pool time by 2. Two nearest-neighbour temporal upsamplings, each
// followed by conv3d+ReLU, restore the full length; a 1x1x1 conv plus
// spatial averaging yields the waveform, and the global-pooled decoder
// features feed the saturation head.
struct PhysNetConfig {
    int64_t input_hw = 32;  // 32 desk-scale, 128 paper-scale
    int64_t input_frames = 60;
    std::vector<int64_t> encoder_channels{16, 32, 32, 64};
    int64_t decoder_mid_channels = 64;
    int64_t feature_channels = 128; // pooled feature size for the head
    int64_t head_hidden1 = 60;
    int64_t head_hidden2 = 32;
    double head_bias_init = 95.0; // resting output of the zero-init head

    void validate() const;
};

struct NamedParam {
    std::string name;
    Tensor tensor;
};

class PhysNet {
public:
    PhysNet(const PhysNetConfig& cfg, uint64_t seed);

    const PhysNetConfig& config() const { return cfg_; }

    // Waveform path: [3,T,H,W] -> [T].
    Tensor forward_rppg(const Tensor& clip) const;
    // Saturation path: [3,T,H,W] -> scalar [1].
    Tensor forward_spo2(const Tensor& clip) const;

    std::vector<NamedParam>& parameters() { return params_; }
    const std::vector<NamedParam>& parameters() const { return params_; }
    Tensor param(const std::string& name) const;

    // Marks the first `blocks` encoder conv blocks untrainable. Gradients
    // stop flowing into them entirely.
    void freeze_encoder_blocks(int blocks);
    std::vector<std::string> frozen_names() const;

private:
    Tensor backbone(const Tensor& clip) const; // decoder output [F,T,h,w]

    PhysNetConfig cfg_;
    std::vector<NamedParam> params_;
};

} // namespace pulsekit::nn
