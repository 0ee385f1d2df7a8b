#pragma once

#include <optional>

#include "al/linalg/matrix.hpp"
#include "al/linalg/rng.hpp"
#include "al/nn/activation.hpp"
#include "al/nn/errors.hpp"

namespace al::nn {

struct LayerGrads {
    Matrix weights;
    Matrix bias;
};

// y = act(x · W + bias), W is fan_in × fan_out, bias is 1 × fan_out.
class DenseLayer {
public:
    // He-normal weights, zero bias.
    DenseLayer(std::size_t fan_in, std::size_t fan_out, Activation act, linalg::Rng& rng);
    DenseLayer(Matrix weights, Matrix bias, Activation act);

    Matrix forward(const Matrix& x, bool train);
    Matrix infer(const Matrix& x) const;

    // upstream is d loss / d output. Returns d loss / d input when requested,
    // otherwise an empty matrix.
    Matrix backward(const Matrix& upstream, LayerGrads& grads, bool need_input_grad = true) const;
    // Same, starting from d loss / d pre-activation.
    Matrix backward_preactivation(const Matrix& dpre, LayerGrads& grads, bool need_input_grad = true) const;

    std::size_t fan_in() const noexcept { return weights_.rows(); }
    std::size_t fan_out() const noexcept { return weights_.cols(); }
    Activation activation() const noexcept { return activation_; }
    std::size_t parameter_count() const noexcept { return weights_.size() + bias_.size(); }

    const Matrix& weights() const noexcept { return weights_; }
    const Matrix& bias() const noexcept { return bias_; }
    Matrix& weights() noexcept { return weights_; }
    Matrix& bias() noexcept { return bias_; }

    bool has_cache() const noexcept { return cache_.has_value(); }
    void clear_cache() noexcept { cache_.reset(); }

private:
    struct Cache {
        Matrix input;
        Matrix pre;
        Matrix out;
    };

    Matrix weights_;
    Matrix bias_;
    Activation activation_;
    std::optional<Cache> cache_;
};

}  // namespace al::nn
