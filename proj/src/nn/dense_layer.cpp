#include "al/nn/dense_layer.hpp"

namespace al::nn {

DenseLayer::DenseLayer(std::size_t fan_in, std::size_t fan_out, Activation act, linalg::Rng& rng)
    : weights_(linalg::he_normal(fan_in, fan_out, rng)), bias_(1, fan_out), activation_(act) {}

DenseLayer::DenseLayer(Matrix weights, Matrix bias, Activation act)
    : weights_(std::move(weights)), bias_(std::move(bias)), activation_(act) {
    if (bias_.rows() != 1 || bias_.cols() != weights_.cols())
        throw linalg::ShapeError("dense layer: bias " + bias_.shape_str() + " does not fit weights " +
                                 weights_.shape_str());
}

Matrix DenseLayer::infer(const Matrix& x) const {
    if (x.cols() != fan_in())
        throw linalg::ShapeError("dense layer: input " + x.shape_str() + " does not match weights " +
                                 weights_.shape_str());
    Matrix pre = linalg::matmul(x, weights_);
    linalg::add_row_inplace(pre, bias_);
    return activate(activation_, pre);
}

Matrix DenseLayer::forward(const Matrix& x, bool train) {
    if (!train)
        return infer(x);
    if (x.cols() != fan_in())
        throw linalg::ShapeError("dense layer: input " + x.shape_str() + " does not match weights " +
                                 weights_.shape_str());
    Matrix pre = linalg::matmul(x, weights_);
    linalg::add_row_inplace(pre, bias_);
    Matrix out = activate(activation_, pre);
    cache_ = Cache{x, std::move(pre), out};
    return out;
}

Matrix DenseLayer::backward(const Matrix& upstream, LayerGrads& grads, bool need_input_grad) const {
    if (!cache_)
        throw StateError("dense layer: backward called without a training-mode forward");
    const Matrix dpre = activation_backward(activation_, cache_->pre, cache_->out, upstream);
    return backward_preactivation(dpre, grads, need_input_grad);
}

Matrix DenseLayer::backward_preactivation(const Matrix& dpre, LayerGrads& grads, bool need_input_grad) const {
    if (!cache_)
        throw StateError("dense layer: backward called without a training-mode forward");
    if (dpre.rows() != cache_->input.rows() || dpre.cols() != fan_out())
        throw linalg::ShapeError("dense layer: upstream gradient " + dpre.shape_str() + " does not match output " +
                                 linalg::shape_str(cache_->input.rows(), fan_out()));
    grads.weights = linalg::matmul_tn(cache_->input, dpre);
    grads.bias = linalg::col_sum(dpre);
    if (!need_input_grad)
        return {};
    return linalg::matmul_nt(dpre, weights_);
}

}  // namespace al::nn
