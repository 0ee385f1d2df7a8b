#include "al/core/component.hpp"

#include "al/nn/errors.hpp"
#include "al/nn/loss.hpp"

namespace al::core {

using nn::Activation;

namespace {

nn::MLPBlock make_block(const std::vector<std::size_t>& widths, Activation act, linalg::Rng& rng) {
    return nn::MLPBlock::make(widths, act, act, rng);
}

void require_finite(const Matrix& m, std::size_t component, const char* what) {
    if (!linalg::all_finite(m))
        throw nn::NumericError("component " + std::to_string(component) + ": non-finite values in " + what,
                               component);
}

}  // namespace

Component::Component(std::size_t index, const ComponentDims& dims, const BlockDepths& depths, linalg::Rng& rng,
                     nn::AdamConfig adam)
    : index_(index),
      dims_(dims),
      f_(make_block(f_widths(dims, depths), Activation::Elu, rng)),
      g_(make_block(g_widths(dims, depths), Activation::Sigmoid, rng)),
      b_(make_block(b_widths(dims, depths), Activation::Sigmoid, rng)),
      h_(make_block(h_widths(dims, depths), Activation::Sigmoid, rng)),
      adam_f_(adam),
      adam_g_(adam),
      adam_b_(adam),
      adam_h_(adam) {}

Component::Component(std::size_t index, nn::MLPBlock f, nn::MLPBlock g, nn::MLPBlock b, nn::MLPBlock h,
                     nn::AdamConfig adam)
    : index_(index),
      f_(std::move(f)),
      g_(std::move(g)),
      b_(std::move(b)),
      h_(std::move(h)),
      adam_f_(adam),
      adam_g_(adam),
      adam_b_(adam),
      adam_h_(adam) {
    dims_.s_in = f_.in_dim();
    dims_.s_out = f_.out_dim();
    dims_.t_in = g_.in_dim();
    dims_.t_out = g_.out_dim();
    dims_.bridge_hidden = b_.depth() > 1 ? b_.layers().front().fan_out() : dims_.t_out;
    const auto bad = [&](const std::string& what) {
        throw PlanError("component " + std::to_string(index_) + ": " + what);
    };
    if (b_.in_dim() != dims_.s_out || b_.out_dim() != dims_.t_out)
        bad("bridge must map s_out=" + std::to_string(dims_.s_out) + " to t_out=" + std::to_string(dims_.t_out));
    if (h_.in_dim() != dims_.t_out || h_.out_dim() != dims_.t_in)
        bad("decoder must map t_out=" + std::to_string(dims_.t_out) + " to t_in=" + std::to_string(dims_.t_in));
}

void Component::check_inputs(const Matrix& s_prev, const Matrix& t_prev) const {
    if (s_prev.cols() != dims_.s_in || t_prev.cols() != dims_.t_in || s_prev.rows() != t_prev.rows())
        throw linalg::ShapeError("component " + std::to_string(index_) + ": inputs s " + s_prev.shape_str() +
                                 ", t " + t_prev.shape_str() + " do not match s_in=" + std::to_string(dims_.s_in) +
                                 ", t_in=" + std::to_string(dims_.t_in));
}

ComponentOutput Component::forward(const Matrix& s_prev, const Matrix& t_prev, bool train) {
    check_inputs(s_prev, t_prev);
    ComponentOutput out;
    out.s = f_.forward(s_prev, train);
    out.t = g_.forward(t_prev, train);
    const Matrix bridged = b_.forward(out.s, train);
    const Matrix decoded = h_.forward(out.t, train);
    require_finite(out.s, index_, "s");
    require_finite(out.t, index_, "t");
    require_finite(bridged, index_, "b(s)");
    require_finite(decoded, index_, "h(t)");
    out.losses = {index_, nn::mse_loss(bridged, out.t), nn::mse_loss(decoded, t_prev)};
    return out;
}

ComponentGradients Component::gradients(const Matrix& s_prev, const Matrix& t_prev, ComponentOutput& out,
                                         Flow flows) {
    check_inputs(s_prev, t_prev);
    ComponentGradients grads;
    out.s = f_.forward(s_prev, true);
    out.t = g_.forward(t_prev, true);
    require_finite(out.s, index_, "s");
    require_finite(out.t, index_, "t");

    const Matrix bridged = b_.forward(out.s, true);
    require_finite(bridged, index_, "b(s)");
    out.losses.component = index_;
    out.losses.mse1 = nn::mse_loss(bridged, out.t);
    if (has_flow(flows, Flow::Associated)) {
        Matrix ds;
        grads.b = b_.backward(nn::mse_grad(bridged, out.t), &ds);
        grads.f = f_.backward(ds);
    }

    const Matrix decoded = h_.forward(out.t, true);
    require_finite(decoded, index_, "h(t)");
    out.losses.mse2 = nn::mse_loss(decoded, t_prev);
    if (has_flow(flows, Flow::Autoencoder)) {
        Matrix dt;
        grads.h = h_.backward(nn::mse_grad(decoded, t_prev), &dt);
        grads.g = g_.backward(dt);
    }
    return grads;
}

ComponentOutput Component::update(const Matrix& s_prev, const Matrix& t_prev, Flow flows) {
    ComponentOutput out;
    const ComponentGradients grads = gradients(s_prev, t_prev, out, flows);
    if (has_flow(flows, Flow::Associated)) {
        nn::adam_update(f_, grads.f, adam_f_);
        nn::adam_update(b_, grads.b, adam_b_);
    }
    if (has_flow(flows, Flow::Autoencoder)) {
        nn::adam_update(g_, grads.g, adam_g_);
        nn::adam_update(h_, grads.h, adam_h_);
    }
    return out;
}

void Component::set_learning_rate(double lr) noexcept {
    adam_f_.config.lr = adam_g_.config.lr = adam_b_.config.lr = adam_h_.config.lr = lr;
}

const nn::AdamState& Component::adam_state(char block) const {
    switch (block) {
    case 'f': return adam_f_;
    case 'g': return adam_g_;
    case 'b': return adam_b_;
    case 'h': return adam_h_;
    default: throw std::invalid_argument(std::string("no sub-network '") + block + "'");
    }
}

}  // namespace al::core
