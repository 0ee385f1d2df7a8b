#pragma once

#include <cstddef>

#include "al/core/plan.hpp"
#include "al/linalg/rng.hpp"
#include "al/nn/adam.hpp"
#include "al/nn/mlp_block.hpp"

namespace al::core {

using linalg::Matrix;

// Which local gradient flows an update applies.
//   Associated   mse1 = |b(s_i) - t_i|^2, updates f and b
//   Autoencoder  mse2 = |h(t_i) - t_{i-1}|^2, updates g and h
enum class Flow : unsigned { Associated = 1, Autoencoder = 2, Both = 3 };

constexpr bool has_flow(Flow set, Flow f) noexcept {
    return (static_cast<unsigned>(set) & static_cast<unsigned>(f)) != 0;
}

struct LossRecord {
    std::size_t component = 0;  // 1-based
    double mse1 = 0.0;
    double mse2 = 0.0;

    double local_objective() const noexcept { return mse1 + mse2; }
};

// s and t are the messages handed to the next component. They are plain
// values: nothing downstream can send gradient back through them.
struct ComponentOutput {
    Matrix s;
    Matrix t;
    LossRecord losses;
};

struct ComponentGradients {
    nn::BlockGrads f;
    nn::BlockGrads g;
    nn::BlockGrads b;
    nn::BlockGrads h;
};

// One fold of the network: associated function f (ELU), encoder g, bridge b
// and decoder h (sigmoid), each with its own Adam state.
class Component {
public:
    Component(std::size_t index, const ComponentDims& dims, const BlockDepths& depths, linalg::Rng& rng,
              nn::AdamConfig adam = {});
    Component(std::size_t index, nn::MLPBlock f, nn::MLPBlock g, nn::MLPBlock b, nn::MLPBlock h,
              nn::AdamConfig adam = {});

    // s_i = f(s_prev), t_i = g(t_prev), mse1 = MSE(b(s_i), t_i), mse2 = MSE(h(t_i), t_prev).
    ComponentOutput forward(const Matrix& s_prev, const Matrix& t_prev, bool train);

    // Training-mode forward plus the gradients of the selected flows. t_i is a
    // constant inside mse1, and neither flow reaches s_prev or t_prev.
    ComponentGradients gradients(const Matrix& s_prev, const Matrix& t_prev, ComponentOutput& out,
                                 Flow flows = Flow::Both);

    // gradients() followed by Adam on the touched sub-networks.
    ComponentOutput update(const Matrix& s_prev, const Matrix& t_prev, Flow flows = Flow::Both);

    std::size_t index() const noexcept { return index_; }
    const ComponentDims& dims() const noexcept { return dims_; }

    nn::MLPBlock& f() noexcept { return f_; }
    nn::MLPBlock& g() noexcept { return g_; }
    nn::MLPBlock& b() noexcept { return b_; }
    nn::MLPBlock& h() noexcept { return h_; }
    const nn::MLPBlock& f() const noexcept { return f_; }
    const nn::MLPBlock& g() const noexcept { return g_; }
    const nn::MLPBlock& b() const noexcept { return b_; }
    const nn::MLPBlock& h() const noexcept { return h_; }

    void set_learning_rate(double lr) noexcept;
    double learning_rate() const noexcept { return adam_f_.config.lr; }
    const nn::AdamState& adam_state(char block) const;

private:
    void check_inputs(const Matrix& s_prev, const Matrix& t_prev) const;

    std::size_t index_;
    ComponentDims dims_;
    nn::MLPBlock f_, g_, b_, h_;
    nn::AdamState adam_f_, adam_g_, adam_b_, adam_h_;
};

}  // namespace al::core
