#pragma once

#include <span>
#include <vector>

#include "al/nn/dense_layer.hpp"

namespace al::nn {

struct BlockGrads {
    std::vector<LayerGrads> layers;
};

// A chain of dense layers. Also the parameter container handed to Adam and
// the gradient checker, which see it as a flat list W0, b0, W1, b1, ...
class MLPBlock {
public:
    MLPBlock() = default;
    explicit MLPBlock(std::vector<DenseLayer> layers);

    // widths = {in, h1, ..., out}; hidden layers use `hidden`, the last uses `output`.
    static MLPBlock make(std::span<const std::size_t> widths, Activation hidden, Activation output,
                         linalg::Rng& rng);

    Matrix forward(const Matrix& x, bool train);
    Matrix infer(const Matrix& x) const;

    // Reverse pass from d loss / d output. Writes d loss / d input when input_grad is set.
    BlockGrads backward(const Matrix& upstream, Matrix* input_grad = nullptr) const;
    // Reverse pass starting from d loss / d (last pre-activation).
    BlockGrads backward_preactivation(const Matrix& dpre, Matrix* input_grad = nullptr) const;

    std::size_t in_dim() const;
    std::size_t out_dim() const;
    std::size_t depth() const noexcept { return layers_.size(); }
    std::size_t parameter_count() const noexcept;
    bool has_cache() const noexcept;

    std::vector<DenseLayer>& layers() noexcept { return layers_; }
    const std::vector<DenseLayer>& layers() const noexcept { return layers_; }

    std::vector<Matrix*> parameters();
    std::vector<const Matrix*> parameters() const;

private:
    std::vector<DenseLayer> layers_;
};

// Flattens gradients in the same order as MLPBlock::parameters().
std::vector<const Matrix*> flatten(const BlockGrads& grads);

}  // namespace al::nn
