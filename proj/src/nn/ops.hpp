#pragma once

#include "nn/tensor.hpp"

namespace pulsekit::nn {

// Fixed op set for the spatiotemporal network. Inputs are single-sample
// tensors laid out [C, T, H, W]; batching happens by looping samples and
// averaging losses.

// Same-padded stride-1 3-D convolution. w is [Cout, Cin, kt, kh, kw] and
// kernel dims must be odd; b is [Cout] and may be undefined for no bias.
Tensor conv3d(const Tensor& x, const Tensor& w, const Tensor& b);

Tensor relu(const Tensor& x);

// Block-average pooling by (pt, ph, pw); dimensions must divide evenly.
Tensor avgpool3d(const Tensor& x, int64_t pt, int64_t ph, int64_t pw);

// Nearest-neighbour temporal upsampling by an integer factor.
Tensor upsample_temporal(const Tensor& x, int64_t factor);

// Fully connected layer: x is [In], w is [Out, In], b is [Out].
Tensor dense(const Tensor& x, const Tensor& w, const Tensor& b);

// Mean over H and W: [C, T, H, W] -> [C, T].
Tensor spatial_mean(const Tensor& x);

// Mean over T, H and W: [C, T, H, W] -> [C].
Tensor global_mean(const Tensor& x);

// Standardizes a 1-D feature vector to zero mean / unit variance
// (parameter-free). Keeps the pooled-feature scale compatible with
// unit-variance weight inits regardless of upstream activation magnitudes.
Tensor feature_norm(const Tensor& x);

// Same data, new shape (element count preserved).
Tensor reshape(const Tensor& x, std::vector<int64_t> new_shape);

} // namespace pulsekit::nn
