#include "al/nn/mlp_block.hpp"

#include <algorithm>

namespace al::nn {

MLPBlock::MLPBlock(std::vector<DenseLayer> layers) : layers_(std::move(layers)) {
    for (std::size_t i = 1; i < layers_.size(); ++i)
        if (layers_[i - 1].fan_out() != layers_[i].fan_in())
            throw linalg::ShapeError("mlp block: layer " + std::to_string(i - 1) + " outputs " +
                                     std::to_string(layers_[i - 1].fan_out()) + " but layer " +
                                     std::to_string(i) + " expects " + std::to_string(layers_[i].fan_in()));
}

MLPBlock MLPBlock::make(std::span<const std::size_t> widths, Activation hidden, Activation output,
                        linalg::Rng& rng) {
    if (widths.size() < 2)
        throw linalg::ShapeError("mlp block: need at least input and output widths");
    std::vector<DenseLayer> layers;
    layers.reserve(widths.size() - 1);
    for (std::size_t i = 0; i + 1 < widths.size(); ++i) {
        const bool last = i + 2 == widths.size();
        layers.emplace_back(widths[i], widths[i + 1], last ? output : hidden, rng);
    }
    return MLPBlock(std::move(layers));
}

Matrix MLPBlock::forward(const Matrix& x, bool train) {
    Matrix h = x;
    for (auto& layer : layers_)
        h = layer.forward(h, train);
    return h;
}

Matrix MLPBlock::infer(const Matrix& x) const {
    Matrix h = x;
    for (const auto& layer : layers_)
        h = layer.infer(h);
    return h;
}

BlockGrads MLPBlock::backward(const Matrix& upstream, Matrix* input_grad) const {
    if (layers_.empty())
        throw StateError("mlp block: backward on an empty block");
    BlockGrads grads;
    grads.layers.resize(layers_.size());
    const std::size_t last = layers_.size() - 1;
    Matrix g = layers_[last].backward(upstream, grads.layers[last], last > 0 || input_grad != nullptr);
    for (std::size_t i = last; i-- > 0;)
        g = layers_[i].backward(g, grads.layers[i], i > 0 || input_grad != nullptr);
    if (input_grad)
        *input_grad = std::move(g);
    return grads;
}

BlockGrads MLPBlock::backward_preactivation(const Matrix& dpre, Matrix* input_grad) const {
    if (layers_.empty())
        throw StateError("mlp block: backward on an empty block");
    BlockGrads grads;
    grads.layers.resize(layers_.size());
    const std::size_t last = layers_.size() - 1;
    Matrix g = layers_[last].backward_preactivation(dpre, grads.layers[last], last > 0 || input_grad != nullptr);
    for (std::size_t i = last; i-- > 0;)
        g = layers_[i].backward(g, grads.layers[i], i > 0 || input_grad != nullptr);
    if (input_grad)
        *input_grad = std::move(g);
    return grads;
}

std::size_t MLPBlock::in_dim() const { return layers_.empty() ? 0 : layers_.front().fan_in(); }

std::size_t MLPBlock::out_dim() const { return layers_.empty() ? 0 : layers_.back().fan_out(); }

std::size_t MLPBlock::parameter_count() const noexcept {
    std::size_t n = 0;
    for (const auto& layer : layers_)
        n += layer.parameter_count();
    return n;
}

bool MLPBlock::has_cache() const noexcept {
    return !layers_.empty() &&
           std::all_of(layers_.begin(), layers_.end(), [](const DenseLayer& l) { return l.has_cache(); });
}

std::vector<Matrix*> MLPBlock::parameters() {
    std::vector<Matrix*> out;
    for (auto& layer : layers_) {
        out.push_back(&layer.weights());
        out.push_back(&layer.bias());
    }
    return out;
}

std::vector<const Matrix*> MLPBlock::parameters() const {
    std::vector<const Matrix*> out;
    for (const auto& layer : layers_) {
        out.push_back(&layer.weights());
        out.push_back(&layer.bias());
    }
    return out;
}

std::vector<const Matrix*> flatten(const BlockGrads& grads) {
    std::vector<const Matrix*> out;
    for (const auto& g : grads.layers) {
        out.push_back(&g.weights);
        out.push_back(&g.bias);
    }
    return out;
}

}  // namespace al::nn
