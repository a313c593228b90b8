#include "nn/ops.hpp"

#include <algorithm>
#include <cmath>

#include "nn/gemm.hpp"

namespace pulsekit::nn {

namespace {

struct ConvDims {
    int64_t cin, t, h, w;
    int64_t cout, kt, kh, kw;
    int64_t K() const { return cin * kt * kh * kw; }
    int64_t N() const { return t * h * w; }
};

ConvDims conv_dims(const Tensor& x, const Tensor& w) {
    if (x.shape().size() != 4 || w.shape().size() != 5)
        throw UsageError("conv3d: expected x[C,T,H,W] and w[Cout,Cin,kt,kh,kw], got x" +
                         x.shape_str() + " w" + w.shape_str());
    ConvDims d{x.shape()[0], x.shape()[1], x.shape()[2], x.shape()[3],
               w.shape()[0], w.shape()[2], w.shape()[3], w.shape()[4]};
    if (w.shape()[1] != d.cin)
        throw UsageError("conv3d: channel mismatch between x" + x.shape_str() + " and w" +
                         w.shape_str());
    if (d.kt % 2 == 0 || d.kh % 2 == 0 || d.kw % 2 == 0)
        throw UsageError("conv3d: kernel dims must be odd for same padding");
    return d;
}

// Gather padded patches: col[(ci*kt*kh*kw + offset)][t*h*w + ...].
void im2col(const std::vector<double>& x, const ConvDims& d, std::vector<double>& col) {
    const int64_t K = d.K(), N = d.N();
    col.assign(static_cast<std::size_t>(K * N), 0.0);
    const int64_t pt = d.kt / 2, ph = d.kh / 2, pw = d.kw / 2;
    const int64_t hw = d.h * d.w;
    for (int64_t ci = 0; ci < d.cin; ++ci) {
        const double* xc = x.data() + ci * d.t * hw;
        for (int64_t dt = 0; dt < d.kt; ++dt)
            for (int64_t dy = 0; dy < d.kh; ++dy)
                for (int64_t dx = 0; dx < d.kw; ++dx) {
                    double* row =
                        col.data() +
                        (((ci * d.kt + dt) * d.kh + dy) * d.kw + dx) * N;
                    for (int64_t t = 0; t < d.t; ++t) {
                        int64_t st = t + dt - pt;
                        if (st < 0 || st >= d.t) continue;
                        const double* src = xc + st * hw;
                        double* dst = row + t * hw;
                        int64_t y0 = std::max<int64_t>(0, ph - dy);
                        int64_t y1 = d.h - std::max<int64_t>(0, dy - ph);
                        for (int64_t y = y0; y < y1; ++y) {
                            int64_t sy = y + dy - ph;
                            int64_t x0 = std::max<int64_t>(0, pw - dx);
                            int64_t x1 = d.w - std::max<int64_t>(0, dx - pw);
                            if (x1 <= x0) continue;
                            std::copy_n(src + sy * d.w + (x0 + dx - pw),
                                        static_cast<std::size_t>(x1 - x0),
                                        dst + y * d.w + x0);
                        }
                    }
                }
    }
}

// Scatter-add of col-shaped gradients back onto the input layout.
void col2im_add(const std::vector<double>& col, const ConvDims& d, std::vector<double>& dx) {
    const int64_t N = d.N();
    const int64_t pt = d.kt / 2, ph = d.kh / 2, pw = d.kw / 2;
    const int64_t hw = d.h * d.w;
    for (int64_t ci = 0; ci < d.cin; ++ci) {
        double* xc = dx.data() + ci * d.t * hw;
        for (int64_t dt = 0; dt < d.kt; ++dt)
            for (int64_t dy = 0; dy < d.kh; ++dy)
                for (int64_t dx_ = 0; dx_ < d.kw; ++dx_) {
                    const double* row =
                        col.data() +
                        (((ci * d.kt + dt) * d.kh + dy) * d.kw + dx_) * N;
                    for (int64_t t = 0; t < d.t; ++t) {
                        int64_t st = t + dt - pt;
                        if (st < 0 || st >= d.t) continue;
                        double* dst = xc + st * hw;
                        const double* src = row + t * hw;
                        int64_t y0 = std::max<int64_t>(0, ph - dy);
                        int64_t y1 = d.h - std::max<int64_t>(0, dy - ph);
                        for (int64_t y = y0; y < y1; ++y) {
                            int64_t sy = y + dy - ph;
                            int64_t x0 = std::max<int64_t>(0, pw - dx_);
                            int64_t x1 = d.w - std::max<int64_t>(0, dx_ - pw);
                            for (int64_t xx = x0; xx < x1; ++xx)
                                dst[sy * d.w + (xx + dx_ - pw)] += src[y * d.w + xx];
                        }
                    }
                }
    }
}

std::vector<double>& scratch(int which) {
    thread_local std::vector<double> bufs[3];
    return bufs[which];
}

} // namespace

Tensor conv3d(const Tensor& x, const Tensor& w, const Tensor& b) {
    const ConvDims d = conv_dims(x, w);
    if (b.defined() && b.numel() != d.cout)
        throw UsageError("conv3d: bias shape " + b.shape_str() + " does not match Cout");

    const int64_t K = d.K(), N = d.N();
    std::vector<double>& col = scratch(0);
    im2col(x.values(), d, col);

    std::vector<double> out(static_cast<std::size_t>(d.cout * N), 0.0);
    gemm(static_cast<std::size_t>(d.cout), static_cast<std::size_t>(N),
         static_cast<std::size_t>(K), w.values().data(), col.data(), out.data());
    if (b.defined())
        for (int64_t co = 0; co < d.cout; ++co) {
            double bias = b.values()[static_cast<std::size_t>(co)];
            double* row = out.data() + co * N;
            for (int64_t i = 0; i < N; ++i) row[i] += bias;
        }
    check_finite(out, "conv3d");

    std::vector<Tensor> parents{x, w};
    if (b.defined()) parents.push_back(b);
    return Tensor::make_node(
        {d.cout, d.t, d.h, d.w}, std::move(out), std::move(parents),
        [x, w, b, d](Tensor& self) mutable {
            const int64_t K = d.K(), N = d.N();
            const auto& dy = *self.grad_if_any();

            if (w.needs_grad()) {
                std::vector<double>& col = scratch(0);
                im2col(x.values(), d, col);
                gemm_abt(static_cast<std::size_t>(d.cout), static_cast<std::size_t>(K),
                         static_cast<std::size_t>(N), dy.data(), col.data(),
                         w.grad().data());
            }
            if (b.defined() && b.needs_grad()) {
                auto& db = b.grad();
                for (int64_t co = 0; co < d.cout; ++co) {
                    double s = 0.0;
                    const double* row = dy.data() + co * N;
                    for (int64_t i = 0; i < N; ++i) s += row[i];
                    db[static_cast<std::size_t>(co)] += s;
                }
            }
            if (x.needs_grad()) {
                // dcol = W^T (K x Cout) * dy (Cout x N)
                std::vector<double>& wt = scratch(1);
                wt.assign(static_cast<std::size_t>(K * d.cout), 0.0);
                for (int64_t co = 0; co < d.cout; ++co)
                    for (int64_t k = 0; k < K; ++k)
                        wt[static_cast<std::size_t>(k * d.cout + co)] =
                            w.values()[static_cast<std::size_t>(co * K + k)];
                std::vector<double>& dcol = scratch(2);
                dcol.assign(static_cast<std::size_t>(K * N), 0.0);
                gemm(static_cast<std::size_t>(K), static_cast<std::size_t>(N),
                     static_cast<std::size_t>(d.cout), wt.data(), dy.data(), dcol.data());
                col2im_add(dcol, d, x.grad());
            }
        });
}

Tensor relu(const Tensor& x) {
    std::vector<double> out = x.values();
    for (double& v : out) v = v > 0.0 ? v : 0.0;
    return Tensor::make_node(x.shape(), std::move(out), {x}, [x](Tensor& self) mutable {
        if (!x.needs_grad()) return;
        const auto& dy = *self.grad_if_any();
        auto& dx = x.grad();
        const auto& xv = x.values();
        for (std::size_t i = 0; i < dx.size(); ++i)
            if (xv[i] > 0.0) dx[i] += dy[i];
    });
}

Tensor avgpool3d(const Tensor& x, int64_t pt, int64_t ph, int64_t pw) {
    if (x.shape().size() != 4)
        throw UsageError("avgpool3d: expected [C,T,H,W], got " + x.shape_str());
    const int64_t c = x.shape()[0], t = x.shape()[1], h = x.shape()[2], w = x.shape()[3];
    if (pt < 1 || ph < 1 || pw < 1 || t % pt || h % ph || w % pw)
        throw UsageError("avgpool3d: pool factors must divide dims; got " + x.shape_str());
    const int64_t ot = t / pt, oh = h / ph, ow = w / pw;
    const double inv = 1.0 / static_cast<double>(pt * ph * pw);

    std::vector<double> out(static_cast<std::size_t>(c * ot * oh * ow), 0.0);
    const auto& xv = x.values();
    for (int64_t ci = 0; ci < c; ++ci)
        for (int64_t to = 0; to < ot; ++to)
            for (int64_t yo = 0; yo < oh; ++yo)
                for (int64_t xo = 0; xo < ow; ++xo) {
                    double s = 0.0;
                    for (int64_t dt = 0; dt < pt; ++dt)
                        for (int64_t dy = 0; dy < ph; ++dy)
                            for (int64_t dx = 0; dx < pw; ++dx)
                                s += xv[static_cast<std::size_t>(
                                    ((ci * t + to * pt + dt) * h + yo * ph + dy) * w +
                                    xo * pw + dx)];
                    out[static_cast<std::size_t>(((ci * ot + to) * oh + yo) * ow + xo)] =
                        s * inv;
                }
    check_finite(out, "avgpool3d");

    return Tensor::make_node(
        {c, ot, oh, ow}, std::move(out), {x},
        [x, c, t, h, w, pt, ph, pw, ot, oh, ow, inv](Tensor& self) mutable {
            if (!x.needs_grad()) return;
            const auto& dy = *self.grad_if_any();
            auto& dx = x.grad();
            for (int64_t ci = 0; ci < c; ++ci)
                for (int64_t to = 0; to < ot; ++to)
                    for (int64_t yo = 0; yo < oh; ++yo)
                        for (int64_t xo = 0; xo < ow; ++xo) {
                            double g = dy[static_cast<std::size_t>(
                                           ((ci * ot + to) * oh + yo) * ow + xo)] *
                                       inv;
                            for (int64_t dt = 0; dt < pt; ++dt)
                                for (int64_t dyy = 0; dyy < ph; ++dyy)
                                    for (int64_t dxx = 0; dxx < pw; ++dxx)
                                        dx[static_cast<std::size_t>(
                                            ((ci * t + to * pt + dt) * h + yo * ph + dyy) *
                                                w +
                                            xo * pw + dxx)] += g;
                        }
        });
}

Tensor upsample_temporal(const Tensor& x, int64_t factor) {
    if (x.shape().size() != 4)
        throw UsageError("upsample_temporal: expected [C,T,H,W], got " + x.shape_str());
    if (factor < 1) throw UsageError("upsample_temporal: factor must be >= 1");
    const int64_t c = x.shape()[0], t = x.shape()[1], h = x.shape()[2], w = x.shape()[3];
    const int64_t ot = t * factor;
    const int64_t hw = h * w;

    std::vector<double> out(static_cast<std::size_t>(c * ot * hw));
    const auto& xv = x.values();
    for (int64_t ci = 0; ci < c; ++ci)
        for (int64_t to = 0; to < ot; ++to)
            std::copy_n(xv.data() + (ci * t + to / factor) * hw,
                        static_cast<std::size_t>(hw),
                        out.data() + (ci * ot + to) * hw);

    return Tensor::make_node(
        {c, ot, h, w}, std::move(out), {x}, [x, c, t, hw, factor, ot](Tensor& self) mutable {
            if (!x.needs_grad()) return;
            const auto& dy = *self.grad_if_any();
            auto& dx = x.grad();
            for (int64_t ci = 0; ci < c; ++ci)
                for (int64_t to = 0; to < ot; ++to) {
                    const double* src = dy.data() + (ci * ot + to) * hw;
                    double* dst = dx.data() + (ci * t + to / factor) * hw;
                    for (int64_t i = 0; i < hw; ++i) dst[i] += src[i];
                }
        });
}

Tensor dense(const Tensor& x, const Tensor& w, const Tensor& b) {
    if (x.shape().size() != 1 || w.shape().size() != 2)
        throw UsageError("dense: expected x[In], w[Out,In], got x" + x.shape_str() + " w" +
                         w.shape_str());
    const int64_t in = x.shape()[0], out_n = w.shape()[0];
    if (w.shape()[1] != in)
        throw UsageError("dense: weight shape " + w.shape_str() + " does not match input " +
                         x.shape_str());
    if (b.defined() && b.numel() != out_n)
        throw UsageError("dense: bias shape " + b.shape_str() + " does not match output");

    std::vector<double> out(static_cast<std::size_t>(out_n), 0.0);
    for (int64_t o = 0; o < out_n; ++o) {
        double s = b.defined() ? b.values()[static_cast<std::size_t>(o)] : 0.0;
        const double* row = w.values().data() + o * in;
        for (int64_t i = 0; i < in; ++i) s += row[i] * x.values()[static_cast<std::size_t>(i)];
        out[static_cast<std::size_t>(o)] = s;
    }
    check_finite(out, "dense");

    std::vector<Tensor> parents{x, w};
    if (b.defined()) parents.push_back(b);
    return Tensor::make_node(
        {out_n}, std::move(out), std::move(parents), [x, w, b, in, out_n](Tensor& self) mutable {
            const auto& dy = *self.grad_if_any();
            if (w.needs_grad()) {
                auto& dw = w.grad();
                for (int64_t o = 0; o < out_n; ++o)
                    for (int64_t i = 0; i < in; ++i)
                        dw[static_cast<std::size_t>(o * in + i)] +=
                            dy[static_cast<std::size_t>(o)] *
                            x.values()[static_cast<std::size_t>(i)];
            }
            if (b.defined() && b.needs_grad()) {
                auto& db = b.grad();
                for (int64_t o = 0; o < out_n; ++o)
                    db[static_cast<std::size_t>(o)] += dy[static_cast<std::size_t>(o)];
            }
            if (x.needs_grad()) {
                auto& dx = x.grad();
                for (int64_t o = 0; o < out_n; ++o) {
                    const double* row = w.values().data() + o * in;
                    double g = dy[static_cast<std::size_t>(o)];
                    for (int64_t i = 0; i < in; ++i)
                        dx[static_cast<std::size_t>(i)] += g * row[i];
                }
            }
        });
}

Tensor spatial_mean(const Tensor& x) {
    if (x.shape().size() != 4)
        throw UsageError("spatial_mean: expected [C,T,H,W], got " + x.shape_str());
    const int64_t c = x.shape()[0], t = x.shape()[1], hw = x.shape()[2] * x.shape()[3];
    const double inv = 1.0 / static_cast<double>(hw);
    std::vector<double> out(static_cast<std::size_t>(c * t), 0.0);
    for (int64_t ci = 0; ci < c; ++ci)
        for (int64_t ti = 0; ti < t; ++ti) {
            const double* src = x.values().data() + (ci * t + ti) * hw;
            double s = 0.0;
            for (int64_t i = 0; i < hw; ++i) s += src[i];
            out[static_cast<std::size_t>(ci * t + ti)] = s * inv;
        }
    check_finite(out, "spatial_mean");
    return Tensor::make_node({c, t}, std::move(out), {x}, [x, c, t, hw, inv](Tensor& self) mutable {
        if (!x.needs_grad()) return;
        const auto& dy = *self.grad_if_any();
        auto& dx = x.grad();
        for (int64_t ci = 0; ci < c; ++ci)
            for (int64_t ti = 0; ti < t; ++ti) {
                double g = dy[static_cast<std::size_t>(ci * t + ti)] * inv;
                double* dst = dx.data() + (ci * t + ti) * hw;
                for (int64_t i = 0; i < hw; ++i) dst[i] += g;
            }
    });
}

Tensor global_mean(const Tensor& x) {
    if (x.shape().size() != 4)
        throw UsageError("global_mean: expected [C,T,H,W], got " + x.shape_str());
    const int64_t c = x.shape()[0];
    const int64_t thw = x.shape()[1] * x.shape()[2] * x.shape()[3];
    const double inv = 1.0 / static_cast<double>(thw);
    std::vector<double> out(static_cast<std::size_t>(c), 0.0);
    for (int64_t ci = 0; ci < c; ++ci) {
        const double* src = x.values().data() + ci * thw;
        double s = 0.0;
        for (int64_t i = 0; i < thw; ++i) s += src[i];
        out[static_cast<std::size_t>(ci)] = s * inv;
    }
    check_finite(out, "global_mean");
    return Tensor::make_node({c}, std::move(out), {x}, [x, c, thw, inv](Tensor& self) mutable {
        if (!x.needs_grad()) return;
        const auto& dy = *self.grad_if_any();
        auto& dx = x.grad();
        for (int64_t ci = 0; ci < c; ++ci) {
            double g = dy[static_cast<std::size_t>(ci)] * inv;
            double* dst = dx.data() + ci * thw;
            for (int64_t i = 0; i < thw; ++i) dst[i] += g;
        }
    });
}

Tensor feature_norm(const Tensor& x) {
    if (x.shape().size() != 1 || x.numel() < 2)
        throw UsageError("feature_norm: expected a 1-D vector, got " + x.shape_str());
    const std::size_t n = x.values().size();
    const double dn = static_cast<double>(n);
    double mean = 0.0;
    for (double v : x.values()) mean += v;
    mean /= dn;
    double var = 0.0;
    for (double v : x.values()) var += (v - mean) * (v - mean);
    var /= dn;
    const double eps = 1e-6;
    const double inv_sd = 1.0 / std::sqrt(var + eps);

    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = (x.values()[i] - mean) * inv_sd;
    check_finite(out, "feature_norm");

    return Tensor::make_node(
        x.shape(), std::move(out), {x}, [x, mean, inv_sd, dn](Tensor& self) mutable {
            if (!x.needs_grad()) return;
            const auto& dy = *self.grad_if_any();
            const auto& y = self.values(); // normalized outputs
            auto& dx = x.grad();
            double dy_sum = 0.0, dy_dot_y = 0.0;
            for (std::size_t i = 0; i < dy.size(); ++i) {
                dy_sum += dy[i];
                dy_dot_y += dy[i] * y[i];
            }
            for (std::size_t i = 0; i < dy.size(); ++i)
                dx[i] += inv_sd * (dy[i] - dy_sum / dn - y[i] * dy_dot_y / dn);
        });
}

Tensor reshape(const Tensor& x, std::vector<int64_t> new_shape) {
    if (shape_numel(new_shape) != x.numel())
        throw UsageError("reshape: element count mismatch for " + x.shape_str());
    return Tensor::make_node(std::move(new_shape), x.values(), {x}, [x](Tensor& self) mutable {
        if (!x.needs_grad()) return;
        const auto& dy = *self.grad_if_any();
        auto& dx = x.grad();
        for (std::size_t i = 0; i < dx.size(); ++i) dx[i] += dy[i];
    });
}

} // namespace pulsekit::nn
