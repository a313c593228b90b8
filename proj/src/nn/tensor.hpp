#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "common/error.hpp"

namespace pulsekit::nn {

// Reverse-mode autodiff tensor. Ops record their parents and a backward
// closure; Tensor::backward() runs the tape in reverse topological order.
// Values are validated finite after every op (NaN guard).
class Tensor {
public:
    Tensor() = default;

    static Tensor zeros(std::vector<int64_t> shape, bool requires_grad = false);
    static Tensor from_values(std::vector<int64_t> shape, std::vector<double> values,
                              bool requires_grad = false);
    static Tensor scalar(double value, bool requires_grad = false);

    bool defined() const { return impl_ != nullptr; }
    const std::vector<int64_t>& shape() const { return impl().shape; }
    int64_t numel() const;
    std::string shape_str() const;

    // Shared-handle semantics: a const Tensor still refers to mutable
    // storage, like a const shared_ptr.
    std::vector<double>& values() const { return impl().values; }
    double item() const;

    bool requires_grad() const { return impl().requires_grad; }
    // True when a gradient has to flow through this node (it or an ancestor
    // is a trainable leaf). Ops skip recording backward work otherwise.
    bool needs_grad() const { return impl().needs_grad; }

    std::vector<double>& grad() const;
    const std::vector<double>* grad_if_any() const;
    void zero_grad() const;

    // Run reverse-mode accumulation from this scalar; seed_grad scales the
    // whole gradient (minibatch averaging hook).
    void backward(double seed_grad = 1.0);

    // Graph construction helpers for op implementations.
    static Tensor make_node(std::vector<int64_t> shape, std::vector<double> values,
                            std::vector<Tensor> parents,
                            std::function<void(Tensor&)> backward_fn);

    struct Impl {
        std::vector<int64_t> shape;
        std::vector<double> values;
        std::vector<double> grad; // empty until touched
        bool requires_grad = false;
        bool needs_grad = false;
        std::vector<Tensor> parents;
        std::function<void(Tensor&)> backward_fn; // adds to parent grads
        int topo_mark = 0;
    };

    Impl& impl() const {
        if (!impl_) throw UsageError("tensor: use of an undefined tensor");
        return *impl_;
    }
    std::shared_ptr<Impl> impl_ptr() const { return impl_; }

private:
    explicit Tensor(std::shared_ptr<Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<Impl> impl_;
};

// Throws NumericError when any value is non-finite.
void check_finite(const std::vector<double>& values, const char* where);

int64_t shape_numel(const std::vector<int64_t>& shape);

} // namespace pulsekit::nn
