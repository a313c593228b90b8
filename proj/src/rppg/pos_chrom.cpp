#include "rppg/pos_chrom.hpp"

#include <cmath>
#include <numbers>

namespace pulsekit::rppg {

namespace {

constexpr double kWindowSeconds = 1.6;

double stddev(const std::vector<double>& x) {
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    double acc = 0.0;
    for (double v : x) acc += (v - mean) * (v - mean);
    return std::sqrt(acc / static_cast<double>(x.size()));
}

// Shared window/overlap-add driver; `project` maps the temporally normalized
// channels of one window to the pulse estimate for that window.
template <typename Project>
signal::Waveform sliding_projection(const RoiTrace& trace, Project project) {
    const std::size_t n = trace.length();
    const auto win = static_cast<std::size_t>(std::lround(kWindowSeconds * trace.fps));
    if (n < win)
        throw UsageError("classical rppg: trace must cover at least 1.6 s");

    double channel_var = 0.0;
    for (int c = 0; c < 3; ++c) {
        std::vector<double> chan(n);
        for (std::size_t t = 0; t < n; ++t) chan[t] = trace.mean_rgb[t][static_cast<std::size_t>(c)];
        channel_var += stddev(chan);
    }
    if (channel_var < 1e-12)
        throw NumericError("classical rppg: zero-variance trace carries no pulse");

    std::vector<double> hann(win);
    for (std::size_t k = 0; k < win; ++k)
        hann[k] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(k) /
                                       static_cast<double>(win - 1));

    std::vector<double> out(n, 0.0), weight(n, 0.0);
    std::vector<double> norm[3];
    for (auto& v : norm) v.resize(win);

    for (std::size_t start = 0; start + win <= n; ++start) {
        for (int c = 0; c < 3; ++c) {
            double mean = 0.0;
            for (std::size_t k = 0; k < win; ++k)
                mean += trace.mean_rgb[start + k][static_cast<std::size_t>(c)];
            mean /= static_cast<double>(win);
            if (mean < 1e-12) mean = 1e-12;
            for (std::size_t k = 0; k < win; ++k)
                norm[c][k] = trace.mean_rgb[start + k][static_cast<std::size_t>(c)] / mean;
        }
        std::vector<double> h = project(norm);
        double mean_h = 0.0;
        for (double v : h) mean_h += v;
        mean_h /= static_cast<double>(win);
        for (std::size_t k = 0; k < win; ++k) {
            out[start + k] += hann[k] * (h[k] - mean_h);
            weight[start + k] += hann[k];
        }
    }
    for (std::size_t t = 0; t < n; ++t)
        if (weight[t] > 1e-12) out[t] /= weight[t];
    return signal::Waveform(std::move(out), trace.fps);
}

} // namespace

signal::Waveform pos(const RoiTrace& trace) {
    return sliding_projection(trace, [](std::vector<double> (&cn)[3]) {
        const std::size_t win = cn[0].size();
        std::vector<double> s1(win), s2(win);
        for (std::size_t k = 0; k < win; ++k) {
            s1[k] = cn[1][k] - cn[2][k];
            s2[k] = cn[1][k] + cn[2][k] - 2.0 * cn[0][k];
        }
        double sd2 = stddev(s2);
        double alpha = sd2 > 1e-12 ? stddev(s1) / sd2 : 0.0;
        std::vector<double> h(win);
        for (std::size_t k = 0; k < win; ++k) h[k] = s1[k] + alpha * s2[k];
        return h;
    });
}

signal::Waveform chrom(const RoiTrace& trace) {
    return sliding_projection(trace, [](std::vector<double> (&cn)[3]) {
        const std::size_t win = cn[0].size();
        std::vector<double> xs(win), ys(win);
        for (std::size_t k = 0; k < win; ++k) {
            xs[k] = 3.0 * cn[0][k] - 2.0 * cn[1][k];
            ys[k] = 1.5 * cn[0][k] + cn[1][k] - 1.5 * cn[2][k];
        }
        double sdy = stddev(ys);
        double alpha = sdy > 1e-12 ? stddev(xs) / sdy : 0.0;
        std::vector<double> h(win);
        for (std::size_t k = 0; k < win; ++k) h[k] = xs[k] - alpha * ys[k];
        return h;
    });
}

} // namespace pulsekit::rppg
