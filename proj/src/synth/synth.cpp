#include "synth/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <json.hpp>

#include <fstream>

#include "common/rng.hpp"
#include "io/containers.hpp"
#include "signal/filter.hpp"

namespace pulsekit::synth {

namespace {

constexpr double kSkin[3] = {0.70, 0.55, 0.42};
constexpr double kBackground[3] = {0.25, 0.28, 0.33};
constexpr double kMarker[3] = {0.06, 0.06, 0.07};

double pulse_shape(double theta) {
    return 0.8 * std::sin(theta) + 0.25 * std::sin(2.0 * theta + 1.0);
}

std::string two_digits(int v) {
    std::string s = std::to_string(v);
    return s.size() < 2 ? "0" + s : s;
}

} // namespace

void SynthConfig::validate() const {
    if (n_subjects < 1 || clips_per_subject < 1)
        throw UsageError("synth config: need at least one subject and recording");
    if (!(fps > 0.0) || !(ppg_rate_hz > 0.0))
        throw UsageError("synth config: rates must be positive");
    if (!(hr_min_bpm < hr_max_bpm) || !(spo2_min_pct < spo2_max_pct))
        throw UsageError("synth config: degenerate label ranges");
    if (artifact_rate < 0.0 || artifact_rate > 1.0)
        throw UsageError("synth config: artifact_rate must lie in [0, 1]");
    if (clip_seconds < 2.0)
        throw UsageError("synth config: recordings must cover at least one 2 s window");
    for (int r : rotation_bins)
        if (r % 90 != 0) throw UsageError("synth config: rotation bins must be multiples of 90");
}

SynthClip generate_recording(const SynthConfig& cfg, int subject, int recording) {
    cfg.validate();
    Rng root(cfg.seed);
    Rng rng = root.stream("recording",
                          static_cast<uint64_t>(subject) * 1000u +
                              static_cast<uint64_t>(recording));

    const std::string subject_id = "s" + two_digits(subject);
    const std::string recording_id = subject_id + "r" + two_digits(recording);

    const auto n_frames = static_cast<std::size_t>(std::llround(cfg.clip_seconds * cfg.fps));
    const auto n_ppg = static_cast<std::size_t>(std::llround(cfg.clip_seconds * cfg.ppg_rate_hz));
    const auto n_windows = static_cast<std::size_t>(std::floor(cfg.clip_seconds / 2.0));

    // Vitals trajectories: slow drift around a per-recording operating point.
    const double hr_margin = std::min(3.0, 0.5 * (cfg.hr_max_bpm - cfg.hr_min_bpm));
    const double f0 = rng.uniform(cfg.hr_min_bpm + hr_margin, cfg.hr_max_bpm - hr_margin) / 60.0;
    const double hr_drift_period = rng.uniform(20.0, 40.0);
    const double hr_drift_phase = rng.uniform(0.0, 2.0 * std::numbers::pi);

    // Right-skewed saturation: max of two uniforms piles mass near the top,
    // like ward data where most readings sit close to 100%.
    const double s_lo = cfg.spo2_min_pct + 0.5, s_hi = cfg.spo2_max_pct - 0.5;
    const double u = std::max(rng.uniform(), rng.uniform());
    const double s0 = s_lo + (s_hi - s_lo) * u;
    const double s_drift_phase = rng.uniform(0.0, 2.0 * std::numbers::pi);

    auto hr_hz_at = [&](double t) {
        return f0 * (1.0 + 0.015 * std::sin(2.0 * std::numbers::pi * t / hr_drift_period +
                                            hr_drift_phase));
    };
    auto spo2_at = [&](double t) {
        return s0 + 0.4 * std::sin(2.0 * std::numbers::pi * t / 45.0 + s_drift_phase);
    };

    // Phase integrated on the PPG grid; video frames sample the same phase.
    const double dt = 1.0 / cfg.ppg_rate_hz;
    std::vector<double> theta(n_ppg), inst_hz(n_ppg);
    double th = rng.uniform(0.0, 2.0 * std::numbers::pi);
    for (std::size_t i = 0; i < n_ppg; ++i) {
        double t = static_cast<double>(i) * dt;
        inst_hz[i] = hr_hz_at(t);
        theta[i] = th;
        th += 2.0 * std::numbers::pi * inst_hz[i] * dt;
    }

    // Reference PPG with light respiration and sensor noise.
    const double resp_phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    std::vector<double> ppg(n_ppg);
    for (std::size_t i = 0; i < n_ppg; ++i) {
        double t = static_cast<double>(i) * dt;
        ppg[i] = pulse_shape(theta[i]) +
                 0.06 * std::sin(2.0 * std::numbers::pi * 0.22 * t + resp_phase) +
                 0.01 * rng.normal();
    }
    signal::Waveform ppg_ref(std::move(ppg), cfg.ppg_rate_hz);

    // Per-window labels: mean instantaneous rate / saturation.
    std::vector<double> hr_series(n_windows), spo2_series(n_windows);
    const auto per_window = static_cast<std::size_t>(std::llround(2.0 * cfg.ppg_rate_hz));
    for (std::size_t wnd = 0; wnd < n_windows; ++wnd) {
        double hr_acc = 0.0, s_acc = 0.0;
        for (std::size_t i = 0; i < per_window; ++i) {
            std::size_t k = wnd * per_window + i;
            hr_acc += inst_hz[k] * 60.0;
            s_acc += spo2_at(static_cast<double>(k) * dt);
        }
        hr_series[wnd] = hr_acc / static_cast<double>(per_window);
        spo2_series[wnd] = s_acc / static_cast<double>(per_window);
    }

    // Face geometry (upright layout).
    const double cx = cfg.frame_w / 2.0 + rng.uniform(-3.0, 3.0);
    const double cy = cfg.frame_h / 2.0 * 1.06 + rng.uniform(-3.0, 3.0);
    const double ax = 0.24 * cfg.frame_w + rng.uniform(-1.5, 1.5);
    const double by = 0.31 * cfg.frame_h + rng.uniform(-1.5, 1.5);
    const double marker_y0 = cy - 0.84 * by, marker_y1 = cy - 0.68 * by;
    const double marker_x0 = cx - 0.72 * ax, marker_x1 = cx + 0.72 * ax;

    const double drift_phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double drift_hz = rng.uniform(0.05, 0.11);

    video::FrameTensor frames(n_frames, static_cast<std::size_t>(cfg.frame_h),
                              static_cast<std::size_t>(cfg.frame_w), cfg.fps);

    long bx0 = cfg.frame_w, bx1 = -1, by0 = cfg.frame_h, by1 = -1;
    const double ppg_per_frame = cfg.ppg_rate_hz / cfg.fps;
    for (std::size_t t = 0; t < n_frames; ++t) {
        auto k = static_cast<std::size_t>(std::llround(static_cast<double>(t) * ppg_per_frame));
        if (k >= n_ppg) k = n_ppg - 1;
        const double p = pulse_shape(theta[k]);
        const double tsec = static_cast<double>(t) / cfg.fps;
        const double drift =
            cfg.illumination_drift_amp *
            std::sin(2.0 * std::numbers::pi * drift_hz * tsec + drift_phase);
        const double spo2 = spo2_at(tsec);
        const double ac[3] = {cfg.blue_ac * ratio_for_spo2(spo2), cfg.green_ac, cfg.blue_ac};

        for (int y = 0; y < cfg.frame_h; ++y) {
            for (int x = 0; x < cfg.frame_w; ++x) {
                const double ex = (x - cx) / ax, ey = (y - cy) / by;
                const bool in_face = ex * ex + ey * ey <= 1.0;
                const bool in_marker = in_face && y >= marker_y0 && y <= marker_y1 &&
                                       x >= marker_x0 && x <= marker_x1;
                for (int c = 0; c < 3; ++c) {
                    double v;
                    if (in_marker) {
                        v = kMarker[c] * (1.0 + drift);
                    } else if (in_face) {
                        v = kSkin[c] * (1.0 + ac[c] * p + drift);
                    } else {
                        v = kBackground[c] * (1.0 + drift);
                    }
                    v += cfg.shot_noise_sigma * rng.normal();
                    frames.at(t, static_cast<std::size_t>(y), static_cast<std::size_t>(x),
                              static_cast<std::size_t>(c)) = std::clamp(v, 0.0, 1.0);
                }
                if (t == 0 && in_face) {
                    bx0 = std::min(bx0, static_cast<long>(x));
                    bx1 = std::max(bx1, static_cast<long>(x));
                    by0 = std::min(by0, static_cast<long>(y));
                    by1 = std::max(by1, static_cast<long>(y));
                }
            }
        }
    }

    video::BBox upright_box{static_cast<int>(bx0), static_cast<int>(by0),
                            static_cast<int>(bx1 - bx0 + 1), static_cast<int>(by1 - by0 + 1)};

    const int orientation =
        cfg.rotation_bins[static_cast<std::size_t>(subject * cfg.clips_per_subject +
                                                   recording) %
                          cfg.rotation_bins.size()];
    const int q = orientation / 90;

    std::vector<std::pair<double, double>> corruption;
    if (cfg.artifact_rate > 0.0) {
        auto corrupted = inject_artifacts(ppg_ref, cfg.artifact_rate,
                                          hash_combine(cfg.seed, hash_str(recording_id)));
        ppg_ref = std::move(corrupted.wave);
        corruption = std::move(corrupted.intervals_s);
    }

    return SynthClip{subject_id,
                     recording_id,
                     frames.rotated90(q),
                     std::move(ppg_ref),
                     std::move(hr_series),
                     std::move(spo2_series),
                     upright_box.rotated90(q, cfg.frame_h, cfg.frame_w),
                     orientation,
                     std::move(corruption)};
}

io::Manifest generate_corpus(const SynthConfig& cfg, const std::filesystem::path& out_dir) {
    cfg.validate();
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir / "raw", ec);
    fs::create_directories(out_dir / "ppg", ec);
    if (!fs::exists(out_dir / "raw") || !fs::exists(out_dir / "ppg"))
        throw DataError("synth-gen: cannot create output directories under " +
                        out_dir.string());

    io::Manifest manifest;
    manifest.fps = cfg.fps;
    nlohmann::json truth;

    for (int s = 0; s < cfg.n_subjects; ++s) {
        io::SubjectEntry subject;
        subject.subject_id = "s" + two_digits(s);
        for (int r = 0; r < cfg.clips_per_subject; ++r) {
            SynthClip clip = generate_recording(cfg, s, r);
            const std::string frames_rel = "raw/" + clip.recording_id + ".pfvf";
            const std::string ppg_rel = "ppg/" + clip.recording_id + ".pfwv";
            io::write_frames(out_dir / frames_rel, clip.frames);
            io::write_wave(out_dir / ppg_rel, clip.ppg_ref);

            io::ClipEntry entry;
            entry.clip_id = clip.recording_id;
            entry.recording_id = clip.recording_id;
            entry.window_index = 0;
            entry.frames_path = frames_rel;
            entry.ppg_path = ppg_rel;
            entry.hr_bpm = clip.hr_series_bpm;
            entry.spo2_pct = clip.spo2_series_pct;
            subject.clips.push_back(std::move(entry));

            nlohmann::json jt;
            jt["orientation_deg"] = clip.orientation_deg;
            jt["true_bbox"] = {clip.true_bbox.x, clip.true_bbox.y, clip.true_bbox.w,
                               clip.true_bbox.h};
            jt["corruption_s"] = clip.corruption_s;
            truth[clip.recording_id] = std::move(jt);
        }
        manifest.subjects.push_back(std::move(subject));
    }

    io::assign_splits_by_subject(manifest, cfg.train_frac, cfg.val_frac, cfg.seed);
    io::save_manifest(out_dir / "manifest.json", manifest);
    std::ofstream truth_out(out_dir / "truth.json");
    truth_out << truth.dump(2) << '\n';
    if (!truth_out) throw DataError("synth-gen: cannot write truth.json");
    return manifest;
}

CorruptionResult inject_artifacts(const signal::Waveform& w, double rate, uint64_t seed) {
    if (rate < 0.0 || rate > 1.0)
        throw UsageError("inject_artifacts: rate must lie in [0, 1]");

    CorruptionResult out{w, {}, 0.0};
    if (rate == 0.0) return out;

    const double fs = w.sample_rate_hz();
    const double duration = w.duration_s();
    const std::size_t n = w.size();

    double sig_rms = 0.0;
    for (double v : w.samples()) sig_rms += v * v;
    sig_rms = std::sqrt(sig_rms / static_cast<double>(n));

    std::vector<bool> corrupt(n, false);
    Rng rng(seed);

    if (rate >= 1.0) {
        corrupt.assign(n, true);
    } else {
        const double target = rate * duration;
        double covered = 0.0;
        for (int guard = 0; guard < 4096 && covered < target - 0.25; ++guard) {
            // Length density ~ L on [0.5, 20] s: biases toward long spans so a
            // realistic share of them crosses the reconstruction threshold.
            double L = std::sqrt(rng.uniform() * (400.0 - 0.25) + 0.25);
            L = std::min(L, std::max(0.5, target - covered));
            if (L > duration) L = duration;
            double start = rng.uniform(0.0, duration - L);
            auto i0 = static_cast<std::size_t>(start * fs);
            auto i1 = std::min(n, i0 + static_cast<std::size_t>(L * fs));
            for (std::size_t i = i0; i < i1; ++i) corrupt[i] = true;
            covered = 0.0;
            for (bool b : corrupt) covered += b ? 1.0 / fs : 0.0;
        }
    }

    // Paint each corrupt run with one artifact type.
    std::size_t i = 0;
    while (i < n) {
        if (!corrupt[i]) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < n && corrupt[j]) ++j;
        const uint64_t kind = rng.below(3);
        if (kind == 0) {
            // high-amplitude noise burst
            for (std::size_t k = i; k < j; ++k)
                out.wave.samples()[k] = 3.5 * sig_rms * rng.normal();
        } else if (kind == 1) {
            // flat-line at the last clean level
            double level = out.wave.samples()[i > 0 ? i - 1 : i];
            for (std::size_t k = i; k < j; ++k)
                out.wave.samples()[k] = level + 0.002 * sig_rms * rng.normal();
        } else {
            // baseline jump with a slow wander; pulse is suppressed
            double level = 2.5 * sig_rms * (rng.uniform() < 0.5 ? -1.0 : 1.0);
            double walk = 0.0;
            for (std::size_t k = i; k < j; ++k) {
                walk += 0.08 * sig_rms * rng.normal();
                out.wave.samples()[k] = level + walk + 0.15 * out.wave.samples()[k];
            }
        }
        out.intervals_s.emplace_back(static_cast<double>(i) / fs, static_cast<double>(j) / fs);
        i = j;
    }

    double covered = 0.0;
    for (bool b : corrupt) covered += b ? 1.0 : 0.0;
    out.corrupted_fraction = covered / static_cast<double>(n);
    return out;
}

double decode_spo2_from_trace(const rppg::RoiTrace& trace) {
    if (trace.length() < 48)
        throw UsageError("decode_spo2: trace too short");
    const signal::FilterCoeffs coeffs =
        signal::design_bandpass({0.4, 4.0, 2}, trace.fps);

    double ac_over_dc[3];
    for (int c = 0; c < 3; ++c) {
        std::vector<double> chan(trace.length());
        double mean = 0.0;
        for (std::size_t t = 0; t < trace.length(); ++t) {
            chan[t] = trace.mean_rgb[t][static_cast<std::size_t>(c)];
            mean += chan[t];
        }
        mean /= static_cast<double>(trace.length());
        std::vector<double> band = signal::filtfilt(coeffs, chan);
        double rms = 0.0;
        for (double v : band) rms += v * v;
        rms = std::sqrt(rms / static_cast<double>(band.size()));
        if (!(mean > 0.0)) throw NumericError("decode_spo2: non-positive DC level");
        ac_over_dc[c] = rms / mean;
    }
    if (!(ac_over_dc[2] > 0.0)) throw NumericError("decode_spo2: no blue pulsation");
    return spo2_for_ratio(ac_over_dc[0] / ac_over_dc[2]);
}

double decode_spo2_from_clip(const video::FrameTensor& clip) {
    // Skin mask from the first frame, same color window the detector uses.
    std::vector<std::size_t> skin;
    const std::size_t hw = clip.height() * clip.width();
    const double* f0 = clip.frame_ptr(0);
    for (std::size_t i = 0; i < hw; ++i) {
        double r = f0[i * 3], g = f0[i * 3 + 1], b = f0[i * 3 + 2];
        if (std::abs(r - kSkin[0]) < 0.16 && std::abs(g - kSkin[1]) < 0.16 &&
            std::abs(b - kSkin[2]) < 0.16 && r > g && g > b)
            skin.push_back(i);
    }
    if (skin.size() < 32) throw NumericError("decode_spo2: no skin region found");

    rppg::RoiTrace trace;
    trace.fps = clip.fps();
    trace.mean_rgb.resize(clip.frames());
    for (std::size_t t = 0; t < clip.frames(); ++t) {
        const double* p = clip.frame_ptr(t);
        double acc[3] = {0.0, 0.0, 0.0};
        for (std::size_t i : skin)
            for (std::size_t c = 0; c < 3; ++c) acc[c] += p[i * 3 + c];
        for (std::size_t c = 0; c < 3; ++c)
            trace.mean_rgb[t][c] = acc[c] / static_cast<double>(skin.size());
    }
    return decode_spo2_from_trace(trace);
}

} // namespace pulsekit::synth
