#pragma once

#include <functional>
#include <span>
#include <string>

#include "al/linalg/rng.hpp"
#include "al/nn/mlp_block.hpp"

namespace al::nn {

struct GradCheckResult {
    double max_rel_error = 0.0;
    double max_abs_error = 0.0;
    // Largest |numeric gradient|; used for "should be zero" checks.
    double max_numeric = 0.0;
    std::size_t checked = 0;
};

// |a - n| / max(|a|, |n|, floor). Near-zero gradients are compared on an
// absolute scale of `floor` rather than blowing up.
double relative_error(double analytic, double numeric, double floor = 1e-4);

// Central differences of `loss` with respect to every entry of `params`,
// compared against `analytic` (same layout). `analytic` may be empty, in which
// case the numeric gradient is compared against zero.
GradCheckResult check_gradients(const std::function<double()>& loss, std::span<Matrix* const> params,
                                std::span<const Matrix* const> analytic, double eps = 1e-5);

struct BlockCheckOptions {
    std::size_t batch = 3;
    double eps = 1e-5;
    // Added to the first analytic gradient entry to test checker sensitivity.
    double planted_fault = 0.0;
};

// Checks MLPBlock::backward with loss = sum(output ⊙ R) for a random fixed R
// on a random input batch.
GradCheckResult grad_check(MLPBlock& block, linalg::Rng& rng, const BlockCheckOptions& options = {});

}  // namespace al::nn
