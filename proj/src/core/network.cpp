#include "al/core/network.hpp"

namespace al::core {

ALNetwork::ALNetwork(std::vector<Component> components) : components_(std::move(components)) {
    if (components_.empty())
        throw PlanError("network needs at least one component");
    for (std::size_t i = 1; i < components_.size(); ++i) {
        const auto& prev = components_[i - 1].dims();
        const auto& cur = components_[i].dims();
        if (cur.s_in != prev.s_out || cur.t_in != prev.t_out)
            throw PlanError("component " + std::to_string(i + 1) + " does not chain onto component " +
                            std::to_string(i));
    }
    plan_.input_dim = components_.front().dims().s_in;
    plan_.target_dim = components_.front().dims().t_in;
    for (const auto& c : components_) {
        plan_.s_widths.push_back(c.dims().s_out);
        plan_.t_widths.push_back(c.dims().t_out);
    }
    const auto& top = components_.back();
    plan_.top_bridge_hidden = top.dims().bridge_hidden;
    plan_.depths = {top.f().depth(), top.g().depth(), top.b().depth(), top.h().depth()};
}

ALNetwork ALNetwork::build(const NetworkPlan& plan, linalg::Rng& rng, nn::AdamConfig adam) {
    plan.validate();
    ALNetwork net;
    net.plan_ = plan;
    const auto dims = plan.components();
    net.components_.reserve(dims.size());
    for (std::size_t i = 0; i < dims.size(); ++i)
        net.components_.emplace_back(i + 1, dims[i], plan.depths, rng, adam);
    return net;
}

std::size_t ALNetwork::input_dim() const { return components_.empty() ? 0 : components_.front().dims().s_in; }

std::size_t ALNetwork::target_dim() const { return components_.empty() ? 0 : components_.front().dims().t_in; }

Prediction ALNetwork::infer(const Matrix& x) const {
    if (x.cols() != input_dim())
        throw linalg::ShapeError("infer: input " + x.shape_str() + " but network expects " +
                                 std::to_string(input_dim()) + " features");
    Matrix h = x;
    for (const auto& c : components_)
        h = c.f().infer(h);
    h = components_.back().b().infer(h);
    for (auto it = components_.rbegin(); it != components_.rend(); ++it)
        h = it->h().infer(h);
    Prediction p;
    p.classes = linalg::row_argmax(h);
    p.scores = std::move(h);
    return p;
}

Matrix ALNetwork::metafeatures(const Matrix& x, std::size_t component) const {
    if (component == 0 || component > components_.size())
        throw std::out_of_range("metafeatures: component " + std::to_string(component) + " out of range");
    Matrix h = x;
    for (std::size_t i = 0; i < component; ++i)
        h = components_[i].f().infer(h);
    return h;
}

std::vector<LossRecord> ALNetwork::evaluate_losses(const Matrix& x, const Matrix& t0) {
    std::vector<LossRecord> out;
    Matrix s = x;
    Matrix t = t0;
    for (auto& c : components_) {
        auto step = c.forward(s, t, false);
        out.push_back(step.losses);
        s = std::move(step.s);
        t = std::move(step.t);
    }
    return out;
}

std::size_t ALNetwork::effective_parameter_count() const {
    std::size_t n = components_.back().b().parameter_count();
    for (const auto& c : components_)
        n += c.f().parameter_count() + c.h().parameter_count();
    return n;
}

std::size_t ALNetwork::total_parameter_count() const {
    std::size_t n = 0;
    for (const auto& c : components_)
        n += c.f().parameter_count() + c.g().parameter_count() + c.b().parameter_count() + c.h().parameter_count();
    return n;
}

void ALNetwork::set_learning_rate(double lr) noexcept {
    for (auto& c : components_)
        c.set_learning_rate(lr);
}

}  // namespace al::core
