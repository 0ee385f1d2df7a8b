#include "al/nn/loss.hpp"

#include <algorithm>
#include <cmath>

namespace al::nn {

Real mse_loss(const Matrix& prediction, const Matrix& target) {
    linalg::require_same_shape(prediction, target, "mse_loss");
    if (prediction.rows() == 0)
        return 0.0;
    const auto p = prediction.data();
    const auto t = target.data();
    Real total = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const Real d = p[i] - t[i];
        total += d * d;
    }
    return total / static_cast<Real>(prediction.rows());
}

Matrix mse_grad(const Matrix& prediction, const Matrix& target) {
    linalg::require_same_shape(prediction, target, "mse_grad");
    Matrix grad(prediction.rows(), prediction.cols());
    const Real factor = 2.0 / static_cast<Real>(std::max<std::size_t>(prediction.rows(), 1));
    const auto p = prediction.data();
    const auto t = target.data();
    auto g = grad.data();
    for (std::size_t i = 0; i < g.size(); ++i)
        g[i] = factor * (p[i] - t[i]);
    return grad;
}

Real cross_entropy_loss(const Matrix& probabilities, const Matrix& target) {
    linalg::require_same_shape(probabilities, target, "cross_entropy_loss");
    if (probabilities.rows() == 0)
        return 0.0;
    const auto p = probabilities.data();
    const auto t = target.data();
    Real total = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (t[i] != 0.0)
            total -= t[i] * std::log(std::max(p[i], 1e-300));
    return total / static_cast<Real>(probabilities.rows());
}

Matrix softmax_cross_entropy_grad(const Matrix& probabilities, const Matrix& target) {
    linalg::require_same_shape(probabilities, target, "softmax_cross_entropy_grad");
    Matrix grad = linalg::sub(probabilities, target);
    const Real inv = 1.0 / static_cast<Real>(std::max<std::size_t>(probabilities.rows(), 1));
    for (Real& v : grad.data())
        v *= inv;
    return grad;
}

}  // namespace al::nn
