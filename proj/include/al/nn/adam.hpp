#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "al/nn/mlp_block.hpp"

namespace al::nn {

struct AdamConfig {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

// Moment estimates for one list of parameter tensors. Moments are allocated
// on the first update, shaped like the parameters.
struct AdamState {
    AdamConfig config;
    std::vector<Matrix> m;
    std::vector<Matrix> v;
    std::uint64_t step = 0;

    AdamState() = default;
    explicit AdamState(AdamConfig cfg) : config(cfg) {}
};

// Bias-corrected Adam: t += 1, then per entry
//   m = b1 m + (1-b1) g,  v = b2 v + (1-b2) g^2
//   theta -= lr * (m / (1-b1^t)) / (sqrt(v / (1-b2^t)) + eps)
void adam_update(std::span<Matrix* const> params, std::span<const Matrix* const> grads, AdamState& state);

void adam_update(MLPBlock& block, const BlockGrads& grads, AdamState& state);

}  // namespace al::nn
