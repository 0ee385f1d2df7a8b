#include "al/nn/activation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "al/linalg/kernels.hpp"

namespace al::nn {

using linalg::kernels::kParallelThreshold;

std::string_view to_string(Activation act) {
    switch (act) {
    case Activation::Identity: return "identity";
    case Activation::Elu: return "elu";
    case Activation::Sigmoid: return "sigmoid";
    case Activation::Softmax: return "softmax";
    }
    return "unknown";
}

Activation parse_activation(std::string_view name) {
    if (name == "identity") return Activation::Identity;
    if (name == "elu") return Activation::Elu;
    if (name == "sigmoid") return Activation::Sigmoid;
    if (name == "softmax") return Activation::Softmax;
    throw std::invalid_argument("unknown activation '" + std::string(name) + "'");
}

Real elu(Real x) noexcept { return x > 0.0 ? x : std::expm1(x); }

Real elu_derivative(Real x) noexcept { return x > 0.0 ? 1.0 : std::exp(x); }

Real sigmoid(Real x) noexcept {
    if (x >= 0.0)
        return 1.0 / (1.0 + std::exp(-x));
    const Real e = std::exp(x);
    return e / (1.0 + e);
}

Real sigmoid_derivative(Real x) noexcept {
    const Real s = sigmoid(x);
    return s * (1.0 - s);
}

namespace {

template <typename F>
Matrix map(const Matrix& in, F f) {
    Matrix out(in.rows(), in.cols());
    const auto x = in.data();
    auto y = out.data();
    const std::size_t n = y.size();
#pragma omp parallel for schedule(static) if (n > kParallelThreshold / 8)
    for (std::size_t i = 0; i < n; ++i)
        y[i] = f(x[i]);
    return out;
}

Matrix softmax_rows(const Matrix& pre) {
    Matrix out(pre.rows(), pre.cols());
    for (std::size_t r = 0; r < pre.rows(); ++r) {
        const auto z = pre.row(r);
        auto p = out.row(r);
        const Real mx = *std::max_element(z.begin(), z.end());
        Real total = 0.0;
        for (std::size_t c = 0; c < z.size(); ++c) {
            p[c] = std::exp(z[c] - mx);
            total += p[c];
        }
        for (Real& v : p)
            v /= total;
    }
    return out;
}

}  // namespace

Matrix activate(Activation act, const Matrix& pre) {
    switch (act) {
    case Activation::Identity: return pre;
    case Activation::Elu: return map(pre, [](Real x) { return elu(x); });
    case Activation::Sigmoid: return map(pre, [](Real x) { return sigmoid(x); });
    case Activation::Softmax: return softmax_rows(pre);
    }
    return pre;
}

Matrix activation_backward(Activation act, const Matrix& pre, const Matrix& out, const Matrix& upstream) {
    linalg::require_same_shape(out, upstream, "activation_backward");
    Matrix grad(upstream.rows(), upstream.cols());
    const auto z = pre.data();
    const auto a = out.data();
    const auto g = upstream.data();
    auto d = grad.data();
    const std::size_t n = d.size();
    switch (act) {
    case Activation::Identity:
        return upstream;
    case Activation::Elu:
        // For x <= 0 the derivative exp(x) equals elu(x) + 1.
#pragma omp parallel for schedule(static) if (n > kParallelThreshold / 8)
        for (std::size_t i = 0; i < n; ++i)
            d[i] = g[i] * (z[i] > 0.0 ? 1.0 : a[i] + 1.0);
        return grad;
    case Activation::Sigmoid:
#pragma omp parallel for schedule(static) if (n > kParallelThreshold / 8)
        for (std::size_t i = 0; i < n; ++i)
            d[i] = g[i] * a[i] * (1.0 - a[i]);
        return grad;
    case Activation::Softmax:
        for (std::size_t r = 0; r < out.rows(); ++r) {
            const auto p = out.row(r);
            const auto gr = upstream.row(r);
            Real dot = 0.0;
            for (std::size_t c = 0; c < p.size(); ++c)
                dot += gr[c] * p[c];
            auto dr = grad.row(r);
            for (std::size_t c = 0; c < p.size(); ++c)
                dr[c] = p[c] * (gr[c] - dot);
        }
        return grad;
    }
    return grad;
}

}  // namespace al::nn
