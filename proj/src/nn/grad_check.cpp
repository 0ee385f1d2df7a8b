#include "al/nn/grad_check.hpp"

#include <algorithm>
#include <cmath>

namespace al::nn {

double relative_error(double analytic, double numeric, double floor) {
    const double denom = std::max({std::abs(analytic), std::abs(numeric), floor});
    return std::abs(analytic - numeric) / denom;
}

GradCheckResult check_gradients(const std::function<double()>& loss, std::span<Matrix* const> params,
                                std::span<const Matrix* const> analytic, double eps) {
    if (!analytic.empty() && analytic.size() != params.size())
        throw linalg::ShapeError("check_gradients: parameter and gradient lists differ in length");
    GradCheckResult result;
    for (std::size_t t = 0; t < params.size(); ++t) {
        auto values = params[t]->data();
        if (!analytic.empty())
            linalg::require_same_shape(*params[t], *analytic[t], "check_gradients");
        for (std::size_t i = 0; i < values.size(); ++i) {
            const double saved = values[i];
            values[i] = saved + eps;
            const double plus = loss();
            values[i] = saved - eps;
            const double minus = loss();
            values[i] = saved;
            const double numeric = (plus - minus) / (2.0 * eps);
            const double expected = analytic.empty() ? 0.0 : analytic[t]->data()[i];
            result.max_abs_error = std::max(result.max_abs_error, std::abs(expected - numeric));
            result.max_rel_error = std::max(result.max_rel_error, relative_error(expected, numeric));
            result.max_numeric = std::max(result.max_numeric, std::abs(numeric));
            ++result.checked;
        }
    }
    return result;
}

GradCheckResult grad_check(MLPBlock& block, linalg::Rng& rng, const BlockCheckOptions& options) {
    const Matrix x = linalg::normal_matrix(options.batch, block.in_dim(), rng);
    const Matrix projection = linalg::normal_matrix(options.batch, block.out_dim(), rng);

    block.forward(x, true);
    BlockGrads grads = block.backward(projection);
    if (options.planted_fault != 0.0)
        grads.layers.front().weights.data()[0] += options.planted_fault;

    auto loss = [&] { return linalg::sum(linalg::hadamard(block.infer(x), projection)); };
    const auto params = block.parameters();
    const auto flat = flatten(grads);
    return check_gradients(loss, params, flat, options.eps);
}

}  // namespace al::nn
