#include "al/nn/adam.hpp"

#include <cmath>

#include "al/linalg/kernels.hpp"

namespace al::nn {

using linalg::kernels::kParallelThreshold;

void adam_update(std::span<Matrix* const> params, std::span<const Matrix* const> grads, AdamState& state) {
    if (params.size() != grads.size())
        throw linalg::ShapeError("adam: " + std::to_string(params.size()) + " parameter tensors but " +
                                 std::to_string(grads.size()) + " gradients");
    if (state.m.empty()) {
        for (const Matrix* p : params) {
            state.m.emplace_back(p->rows(), p->cols());
            state.v.emplace_back(p->rows(), p->cols());
        }
    }
    if (state.m.size() != params.size())
        throw linalg::ShapeError("adam: state holds " + std::to_string(state.m.size()) + " tensors, got " +
                                 std::to_string(params.size()));
    for (std::size_t i = 0; i < params.size(); ++i) {
        linalg::require_same_shape(*params[i], *grads[i], "adam gradient");
        linalg::require_same_shape(*params[i], state.m[i], "adam state");
    }

    state.step += 1;
    const auto& cfg = state.config;
    const double t = static_cast<double>(state.step);
    const double correction1 = 1.0 - std::pow(cfg.beta1, t);
    const double correction2 = 1.0 - std::pow(cfg.beta2, t);

    for (std::size_t i = 0; i < params.size(); ++i) {
        auto theta = params[i]->data();
        const auto g = grads[i]->data();
        auto m = state.m[i].data();
        auto v = state.v[i].data();
        const std::size_t n = theta.size();
#pragma omp parallel for schedule(static) if (n > kParallelThreshold)
        for (std::size_t j = 0; j < n; ++j) {
            m[j] = cfg.beta1 * m[j] + (1.0 - cfg.beta1) * g[j];
            v[j] = cfg.beta2 * v[j] + (1.0 - cfg.beta2) * g[j] * g[j];
            const double m_hat = m[j] / correction1;
            const double v_hat = v[j] / correction2;
            theta[j] -= cfg.lr * m_hat / (std::sqrt(v_hat) + cfg.epsilon);
        }
    }
}

void adam_update(MLPBlock& block, const BlockGrads& grads, AdamState& state) {
    const auto params = block.parameters();
    const auto flat = flatten(grads);
    adam_update(params, flat, state);
}

}  // namespace al::nn
