#include "nn/tensor.hpp"

#include <cmath>

namespace pulsekit::nn {

int64_t shape_numel(const std::vector<int64_t>& shape) {
    int64_t n = 1;
    for (int64_t d : shape) {
        if (d <= 0) throw UsageError("tensor: dimensions must be positive");
        n *= d;
    }
    return n;
}

void check_finite(const std::vector<double>& values, const char* where) {
    for (double v : values)
        if (!std::isfinite(v))
            throw NumericError(std::string("non-finite value produced by ") + where);
}

Tensor Tensor::zeros(std::vector<int64_t> shape, bool requires_grad) {
    auto impl = std::make_shared<Impl>();
    impl->values.assign(static_cast<std::size_t>(shape_numel(shape)), 0.0);
    impl->shape = std::move(shape);
    impl->requires_grad = requires_grad;
    impl->needs_grad = requires_grad;
    return Tensor(std::move(impl));
}

Tensor Tensor::from_values(std::vector<int64_t> shape, std::vector<double> values,
                           bool requires_grad) {
    if (shape_numel(shape) != static_cast<int64_t>(values.size()))
        throw UsageError("tensor: value count does not match shape");
    check_finite(values, "from_values");
    auto impl = std::make_shared<Impl>();
    impl->shape = std::move(shape);
    impl->values = std::move(values);
    impl->requires_grad = requires_grad;
    impl->needs_grad = requires_grad;
    return Tensor(std::move(impl));
}

Tensor Tensor::scalar(double value, bool requires_grad) {
    return from_values({1}, {value}, requires_grad);
}

int64_t Tensor::numel() const { return static_cast<int64_t>(impl().values.size()); }

std::string Tensor::shape_str() const {
    std::string s = "[";
    for (std::size_t i = 0; i < impl().shape.size(); ++i) {
        if (i) s += ", ";
        s += std::to_string(impl().shape[i]);
    }
    return s + "]";
}

double Tensor::item() const {
    if (numel() != 1) throw UsageError("tensor: item() requires a single element");
    return impl().values[0];
}

std::vector<double>& Tensor::grad() const {
    auto& g = impl().grad;
    if (g.empty()) g.assign(impl().values.size(), 0.0);
    return g;
}

const std::vector<double>* Tensor::grad_if_any() const {
    return impl().grad.empty() ? nullptr : &impl().grad;
}

void Tensor::zero_grad() const { impl().grad.clear(); }

Tensor Tensor::make_node(std::vector<int64_t> shape, std::vector<double> values,
                         std::vector<Tensor> parents,
                         std::function<void(Tensor&)> backward_fn) {
    if (shape_numel(shape) != static_cast<int64_t>(values.size()))
        throw UsageError("tensor: node value count does not match shape");
    auto impl = std::make_shared<Impl>();
    impl->shape = std::move(shape);
    impl->values = std::move(values);
    bool needs = false;
    for (const auto& p : parents) needs = needs || p.needs_grad();
    impl->needs_grad = needs;
    if (needs) {
        impl->parents = std::move(parents);
        impl->backward_fn = std::move(backward_fn);
    }
    return Tensor(std::move(impl));
}

void Tensor::backward(double seed_grad) {
    if (numel() != 1) throw UsageError("backward: root must be a scalar");
    if (!impl().needs_grad) return;

    // Iterative post-order DFS for the topological order.
    std::vector<Impl*> order;
    std::vector<std::pair<Impl*, std::size_t>> stack{{&impl(), 0}};
    impl().topo_mark = 1;
    while (!stack.empty()) {
        auto& [node, next] = stack.back();
        if (next < node->parents.size()) {
            Impl* parent = &node->parents[next].impl();
            ++next;
            if (parent->topo_mark == 0 && parent->needs_grad) {
                parent->topo_mark = 1;
                stack.emplace_back(parent, 0);
            }
        } else {
            order.push_back(node);
            stack.pop_back();
        }
    }

    grad().assign(1, seed_grad);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        Impl* node = *it;
        node->topo_mark = 0;
        if (!node->backward_fn) continue;
        if (node->grad.empty()) continue; // no gradient reached this node
        Tensor self(std::shared_ptr<Impl>(node, [](Impl*) {}));
        node->backward_fn(self);
    }
}

} // namespace pulsekit::nn
