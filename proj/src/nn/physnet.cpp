#include "nn/physnet.hpp"

#include <cmath>

#include "common/rng.hpp"

namespace pulsekit::nn {

void PhysNetConfig::validate() const {
    if (encoder_channels.size() != 4)
        throw UsageError("physnet: exactly four encoder blocks expected");
    if (input_hw % 16 != 0)
        throw UsageError("physnet: input size must be divisible by 16 (four 2x2 pools)");
    if (input_frames % 4 != 0)
        throw UsageError("physnet: frame count must be divisible by 4 (two temporal pools)");
    if (feature_channels < 1 || head_hidden1 < 1 || head_hidden2 < 1)
        throw UsageError("physnet: invalid head sizes");
}

namespace {

Tensor he_conv(std::vector<int64_t> shape, Rng& rng) {
    const auto fan_in = static_cast<double>(shape[1] * shape[2] * shape[3] * shape[4]);
    const double sd = std::sqrt(2.0 / fan_in);
    std::vector<double> v(static_cast<std::size_t>(shape_numel(shape)));
    for (auto& x : v) x = sd * rng.normal();
    return Tensor::from_values(std::move(shape), std::move(v), true);
}

Tensor he_dense(int64_t out, int64_t in, Rng& rng) {
    const double sd = std::sqrt(2.0 / static_cast<double>(in));
    std::vector<double> v(static_cast<std::size_t>(out * in));
    for (auto& x : v) x = sd * rng.normal();
    return Tensor::from_values({out, in}, std::move(v), true);
}

} // namespace

PhysNet::PhysNet(const PhysNetConfig& cfg, uint64_t seed) : cfg_(cfg) {
    cfg_.validate();
    Rng root(seed);
    const auto& ch = cfg_.encoder_channels;

    auto add = [&](const std::string& name, Tensor t) {
        params_.push_back({name, std::move(t)});
    };

    int64_t cin = 3;
    for (std::size_t blk = 0; blk < 4; ++blk) {
        Rng rng = root.stream("enc", blk);
        std::string base = "enc" + std::to_string(blk + 1);
        add(base + ".w", he_conv({ch[blk], cin, 3, 3, 3}, rng));
        add(base + ".b", Tensor::zeros({ch[blk]}, true));
        cin = ch[blk];
    }
    {
        Rng rng = root.stream("dec", 0);
        add("dec1.w", he_conv({cfg_.decoder_mid_channels, ch[3], 3, 3, 3}, rng));
        add("dec1.b", Tensor::zeros({cfg_.decoder_mid_channels}, true));
    }
    {
        Rng rng = root.stream("dec", 1);
        add("dec2.w", he_conv({cfg_.feature_channels, cfg_.decoder_mid_channels, 3, 3, 3}, rng));
        add("dec2.b", Tensor::zeros({cfg_.feature_channels}, true));
    }
    {
        Rng rng = root.stream("rppg_head", 0);
        add("rppg.w", he_conv({1, cfg_.feature_channels, 1, 1, 1}, rng));
        add("rppg.b", Tensor::zeros({1}, true));
    }
    {
        Rng rng = root.stream("spo2_head", 0);
        add("spo2.fc1.w", he_dense(cfg_.head_hidden1, cfg_.feature_channels, rng));
        add("spo2.fc1.b", Tensor::zeros({cfg_.head_hidden1}, true));
        add("spo2.fc2.w", he_dense(cfg_.head_hidden2, cfg_.head_hidden1, rng));
        add("spo2.fc2.b", Tensor::zeros({cfg_.head_hidden2}, true));
        // Zero-init output layer: the untrained head rests at its bias.
        add("spo2.fc3.w", Tensor::zeros({1, cfg_.head_hidden2}, true));
        Tensor out_b = Tensor::zeros({1}, true);
        out_b.values()[0] = cfg_.head_bias_init;
        add("spo2.fc3.b", out_b);
    }
}

Tensor PhysNet::param(const std::string& name) const {
    for (const auto& p : params_)
        if (p.name == name) return p.tensor;
    throw UsageError("physnet: unknown parameter " + name);
}

void PhysNet::freeze_encoder_blocks(int blocks) {
    for (auto& p : params_) {
        for (int b = 1; b <= blocks; ++b) {
            std::string prefix = "enc" + std::to_string(b) + ".";
            if (p.name.rfind(prefix, 0) == 0) {
                p.tensor.impl().requires_grad = false;
                p.tensor.impl().needs_grad = false;
            }
        }
    }
}

std::vector<std::string> PhysNet::frozen_names() const {
    std::vector<std::string> out;
    for (const auto& p : params_)
        if (!p.tensor.requires_grad()) out.push_back(p.name);
    return out;
}

Tensor PhysNet::backbone(const Tensor& clip) const {
    if (clip.shape().size() != 4 || clip.shape()[0] != 3 ||
        clip.shape()[1] != cfg_.input_frames || clip.shape()[2] != cfg_.input_hw ||
        clip.shape()[3] != cfg_.input_hw)
        throw UsageError("physnet: expected clip [3," + std::to_string(cfg_.input_frames) +
                         "," + std::to_string(cfg_.input_hw) + "," +
                         std::to_string(cfg_.input_hw) + "], got " + clip.shape_str());

    Tensor x = clip;
    x = relu(conv3d(x, param("enc1.w"), param("enc1.b")));
    x = avgpool3d(x, 1, 2, 2);
    x = relu(conv3d(x, param("enc2.w"), param("enc2.b")));
    x = avgpool3d(x, 2, 2, 2);
    x = relu(conv3d(x, param("enc3.w"), param("enc3.b")));
    x = avgpool3d(x, 2, 2, 2);
    x = relu(conv3d(x, param("enc4.w"), param("enc4.b")));
    x = avgpool3d(x, 1, 2, 2);

    x = upsample_temporal(x, 2);
    x = relu(conv3d(x, param("dec1.w"), param("dec1.b")));
    x = upsample_temporal(x, 2);
    x = relu(conv3d(x, param("dec2.w"), param("dec2.b")));
    return x; // [feature_channels, T, hw/16, hw/16]
}

Tensor PhysNet::forward_rppg(const Tensor& clip) const {
    Tensor feat = backbone(clip);
    Tensor wave = conv3d(feat, param("rppg.w"), param("rppg.b")); // [1,T,h,w]
    wave = spatial_mean(wave);                                    // [1,T]
    return reshape(wave, {cfg_.input_frames});
}

Tensor PhysNet::forward_spo2(const Tensor& clip) const {
    // Pooled activations end up orders of magnitude below unit scale, which
    // starves the head of gradient; standardizing restores trainability.
    Tensor feat = feature_norm(global_mean(backbone(clip))); // [feature_channels]
    Tensor h = relu(dense(feat, param("spo2.fc1.w"), param("spo2.fc1.b")));
    h = relu(dense(h, param("spo2.fc2.w"), param("spo2.fc2.b")));
    return dense(h, param("spo2.fc3.w"), param("spo2.fc3.b")); // [1]
}

} // namespace pulsekit::nn
