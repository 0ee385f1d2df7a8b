#pragma once

#include "al/linalg/matrix.hpp"

namespace al::nn {

using linalg::Matrix;
using linalg::Real;

// Squared L2 distance per row, averaged over the batch.
Real mse_loss(const Matrix& prediction, const Matrix& target);
// d mse_loss / d prediction = 2 (prediction - target) / batch
Matrix mse_grad(const Matrix& prediction, const Matrix& target);

// Mean over the batch of -sum(target * log(probabilities)).
Real cross_entropy_loss(const Matrix& probabilities, const Matrix& target);
// Gradient of cross_entropy_loss(softmax(z), target) w.r.t. z: (p - target) / batch.
Matrix softmax_cross_entropy_grad(const Matrix& probabilities, const Matrix& target);

}  // namespace al::nn
