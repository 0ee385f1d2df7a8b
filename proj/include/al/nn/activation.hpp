#pragma once

#include <string>
#include <string_view>

#include "al/linalg/matrix.hpp"

namespace al::nn {

using linalg::Matrix;
using linalg::Real;

enum class Activation { Identity, Elu, Sigmoid, Softmax };

std::string_view to_string(Activation act);
Activation parse_activation(std::string_view name);

// ELU with alpha = 1.
Real elu(Real x) noexcept;
Real elu_derivative(Real x) noexcept;
Real sigmoid(Real x) noexcept;
Real sigmoid_derivative(Real x) noexcept;

Matrix activate(Activation act, const Matrix& pre);

// Gradient w.r.t. the pre-activation given the gradient w.r.t. the output.
// `pre` and `out` are the cached pre-activation and activation values.
Matrix activation_backward(Activation act, const Matrix& pre, const Matrix& out, const Matrix& upstream);

}  // namespace al::nn
