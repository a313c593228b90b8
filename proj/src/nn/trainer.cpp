#include "nn/trainer.hpp"

#include <algorithm>
#include <cmath>

#include "common/rng.hpp"
#include "video/preprocess.hpp"

namespace pulsekit::nn {

Tensor prepare_clip_input(const video::FrameTensor& aligned, int64_t hw) {
    const auto size = static_cast<int64_t>(aligned.height());
    if (size != static_cast<int64_t>(aligned.width()))
        throw UsageError("prepare_clip_input: aligned clips must be square");
    video::FrameTensor small =
        size % hw == 0 && size / hw > 1
            ? aligned.pooled_spatial(static_cast<std::size_t>(size / hw))
            : (size == hw ? aligned
                          : aligned.resized_bilinear(static_cast<std::size_t>(hw),
                                                     static_cast<std::size_t>(hw)));
    video::FrameTensor diff = video::diff_normalize(small);

    const auto t_out = static_cast<int64_t>(aligned.frames());
    std::vector<double> data(static_cast<std::size_t>(3 * t_out * hw * hw), 0.0);
    // HWC frames -> [C, T, H, W], with frame 0 left at zero.
    for (std::size_t t = 0; t < diff.frames(); ++t)
        for (int64_t y = 0; y < hw; ++y)
            for (int64_t x = 0; x < hw; ++x)
                for (int64_t c = 0; c < 3; ++c)
                    data[static_cast<std::size_t>(
                        ((c * t_out + static_cast<int64_t>(t) + 1) * hw + y) * hw + x)] =
                        diff.at(t, static_cast<std::size_t>(y), static_cast<std::size_t>(x),
                                static_cast<std::size_t>(c));
    return Tensor::from_values({3, t_out, hw, hw}, std::move(data));
}

Tensor reverse_prepared_input(const Tensor& input) {
    if (input.shape().size() != 4)
        throw UsageError("reverse_prepared_input: expected [3,T,H,W]");
    const int64_t c = input.shape()[0], t = input.shape()[1];
    const int64_t hw = input.shape()[2] * input.shape()[3];
    std::vector<double> data(input.values().size(), 0.0);
    for (int64_t ci = 0; ci < c; ++ci)
        for (int64_t ti = 1; ti < t; ++ti) {
            const double* src = input.values().data() + (ci * t + (t - ti)) * hw;
            double* dst = data.data() + (ci * t + ti) * hw;
            for (int64_t i = 0; i < hw; ++i) dst[i] = -src[i];
        }
    return Tensor::from_values(input.shape(), std::move(data));
}

namespace {

struct SampleRef {
    const ClipSample* clip;
    bool reversed;
};

std::vector<std::size_t> shuffled_indices(std::size_t n, uint64_t seed, int epoch) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    Rng rng(hash_combine(seed, static_cast<uint64_t>(epoch) + 0x9000));
    for (std::size_t i = n; i > 1; --i) std::swap(idx[i - 1], idx[rng.below(i)]);
    return idx;
}

void assert_frozen_untouched(const PhysNet& model) {
    for (const auto& p : model.parameters())
        if (!p.tensor.requires_grad() && p.tensor.grad_if_any())
            throw NumericError("trainer: gradient leaked into frozen parameter " + p.name);
}

std::vector<const ClipSample*> capped(const std::vector<ClipSample>& clips,
                                      std::size_t cap) {
    std::vector<const ClipSample*> out;
    out.reserve(clips.size());
    for (const auto& c : clips) out.push_back(&c);
    if (cap > 0 && out.size() > cap) out.resize(cap);
    return out;
}

} // namespace

TrainResult train_hr(PhysNet& model, const std::vector<ClipSample>& train,
                     const std::vector<ClipSample>& val, const TrainConfig& cfg) {
    if (train.empty()) throw UsageError("train_hr: empty training split");
    if (cfg.epochs < 1 || !(cfg.init_lr >= 0.0))
        throw UsageError("train_hr: invalid epochs/learning rate");

    model.freeze_encoder_blocks(cfg.freeze_encoder_blocks);
    auto train_refs = capped(train, cfg.max_train_clips);

    const auto batch = static_cast<std::size_t>(std::max(1, cfg.batch_size));
    const std::size_t steps_per_epoch = (train_refs.size() + batch - 1) / batch;
    OneCycleSchedule schedule(cfg.init_lr,
                              steps_per_epoch * static_cast<std::size_t>(cfg.epochs),
                              cfg.one_cycle);
    SgdOptimizer opt(model.parameters(), cfg.momentum);

    TrainResult result;
    std::size_t step = 0;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        auto order = shuffled_indices(train_refs.size(), cfg.seed, epoch);
        double train_loss = 0.0;
        std::size_t seen = 0;
        for (std::size_t b0 = 0; b0 < order.size(); b0 += batch) {
            const std::size_t b1 = std::min(order.size(), b0 + batch);
            opt.zero_grad();
            for (std::size_t k = b0; k < b1; ++k) {
                const ClipSample& s = *train_refs[order[k]];
                Tensor target = Tensor::from_values(
                    {static_cast<int64_t>(s.target_wave.size())}, s.target_wave);
                Tensor loss = pearson_loss(model.forward_rppg(s.input), target);
                train_loss += loss.item();
                ++seen;
                // Minibatch mean: scale each clip's contribution.
                loss.backward(1.0 / static_cast<double>(b1 - b0));
            }
            assert_frozen_untouched(model);
            opt.clip_grad_norm(cfg.grad_clip_norm);
            opt.step(schedule.lr_at(step));
            ++step;
        }

        EpochStats stats;
        stats.train_loss = train_loss / static_cast<double>(std::max<std::size_t>(1, seen));
        double val_loss = 0.0;
        for (const auto& s : val) {
            Tensor target = Tensor::from_values({static_cast<int64_t>(s.target_wave.size())},
                                                s.target_wave);
            val_loss += pearson_loss(model.forward_rppg(s.input), target).item();
        }
        stats.val_loss = val.empty() ? 0.0 : val_loss / static_cast<double>(val.size());
        result.history.push_back(stats);
    }
    return result;
}

namespace {

// Concatenates scalar predictions into one 1-D tensor so a batch loss can
// backpropagate into every sample's graph.
Tensor concat_scalars(const std::vector<Tensor>& scalars) {
    std::vector<double> vals(scalars.size());
    for (std::size_t i = 0; i < scalars.size(); ++i) vals[i] = scalars[i].item();
    std::vector<Tensor> parents(scalars.begin(), scalars.end());
    return Tensor::make_node(
        {static_cast<int64_t>(scalars.size())}, std::move(vals), std::move(parents),
        [scalars](Tensor& self) mutable {
            const auto& dy = *self.grad_if_any();
            for (std::size_t i = 0; i < scalars.size(); ++i) {
                Tensor s = scalars[i];
                if (!s.needs_grad()) continue;
                s.grad()[0] += dy[i];
            }
        });
}

} // namespace

TrainResult train_spo2(PhysNet& model, const std::vector<ClipSample>& train,
                       const std::vector<ClipSample>& val, const TrainConfig& cfg) {
    if (train.empty()) throw UsageError("train_spo2: empty training split");

    model.freeze_encoder_blocks(cfg.freeze_encoder_blocks);
    auto train_refs = capped(train, cfg.max_train_clips);

    // Sample-level weights from the smoothed training label distribution.
    std::vector<double> labels;
    labels.reserve(train_refs.size());
    for (const auto* s : train_refs) labels.push_back(s->spo2_label_pct);
    std::vector<double> weights(labels.size(), 1.0);
    if (cfg.use_lds_weights)
        weights = lds_weights(labels, LdsConfig::for_labels(labels));

    // Time reversal contributes each clip once more, same label and weight.
    std::vector<SampleRef> samples;
    std::vector<double> sample_weights;
    for (std::size_t i = 0; i < train_refs.size(); ++i) {
        samples.push_back({train_refs[i], false});
        sample_weights.push_back(weights[i]);
        if (cfg.augment_time_reversal) {
            samples.push_back({train_refs[i], true});
            sample_weights.push_back(weights[i]);
        }
    }

    const auto batch = static_cast<std::size_t>(std::max(1, cfg.batch_size));
    const std::size_t steps_per_epoch = (samples.size() + batch - 1) / batch;
    OneCycleSchedule schedule(cfg.init_lr,
                              steps_per_epoch * static_cast<std::size_t>(cfg.epochs),
                              cfg.one_cycle);
    SgdOptimizer opt(model.parameters(), cfg.momentum);

    TrainResult result;
    std::size_t step = 0;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        auto order = shuffled_indices(samples.size(), cfg.seed, epoch);
        double train_loss = 0.0;
        std::size_t batches = 0;
        for (std::size_t b0 = 0; b0 < order.size(); b0 += batch) {
            const std::size_t b1 = std::min(order.size(), b0 + batch);
            opt.zero_grad();
            std::vector<Tensor> preds;
            std::vector<double> gt, w;
            for (std::size_t k = b0; k < b1; ++k) {
                const SampleRef& ref = samples[order[k]];
                Tensor input = ref.reversed ? reverse_prepared_input(ref.clip->input)
                                            : ref.clip->input;
                preds.push_back(model.forward_spo2(input));
                gt.push_back(ref.clip->spo2_label_pct);
                w.push_back(sample_weights[order[k]]);
            }
            Tensor loss = weighted_rmse(concat_scalars(preds),
                                        Tensor::from_values({static_cast<int64_t>(gt.size())}, gt),
                                        w);
            train_loss += loss.item();
            ++batches;
            loss.backward();
            assert_frozen_untouched(model);
            opt.clip_grad_norm(cfg.grad_clip_norm);
            opt.step(schedule.lr_at(step));
            ++step;
        }

        EpochStats stats;
        stats.train_loss = train_loss / static_cast<double>(std::max<std::size_t>(1, batches));
        double se = 0.0;
        for (const auto& s : val) {
            double e = predict_spo2(model, s.input) - s.spo2_label_pct;
            se += e * e;
        }
        stats.val_loss = val.empty() ? 0.0 : std::sqrt(se / static_cast<double>(val.size()));
        result.history.push_back(stats);
    }
    return result;
}

signal::Waveform predict_rppg(const PhysNet& model, const Tensor& input, double fps) {
    Tensor wave = model.forward_rppg(input);
    return signal::Waveform(wave.values(), fps);
}

double predict_spo2(const PhysNet& model, const Tensor& input) {
    return model.forward_spo2(input).item();
}

} // namespace pulsekit::nn
