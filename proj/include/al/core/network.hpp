#pragma once

#include <vector>

#include "al/core/component.hpp"
#include "al/core/plan.hpp"

namespace al::core {

struct Prediction {
    Matrix scores;
    std::vector<std::size_t> classes;
};

// Ordered components plus the plan they were built from.
class ALNetwork {
public:
    ALNetwork() = default;
    // Hand-assembled networks; checks that components chain.
    explicit ALNetwork(std::vector<Component> components);

    static ALNetwork build(const NetworkPlan& plan, linalg::Rng& rng, nn::AdamConfig adam = {});

    // y_hat = h_1 ∘ ... ∘ h_C ∘ b_C ∘ f_C ∘ ... ∘ f_1 (x). Never touches any g
    // or any bridge but the last.
    Prediction infer(const Matrix& x) const;

    // s_c for 1 <= c <= C (the output of f_c along the inference path).
    Matrix metafeatures(const Matrix& x, std::size_t component) const;

    // Evaluation-mode losses of every component for inputs x and one-hot t0.
    std::vector<LossRecord> evaluate_losses(const Matrix& x, const Matrix& t0);

    std::size_t component_count() const noexcept { return components_.size(); }
    std::size_t input_dim() const;
    std::size_t target_dim() const;
    std::vector<Component>& components() noexcept { return components_; }
    const std::vector<Component>& components() const noexcept { return components_; }
    Component& component(std::size_t index_1based) { return components_.at(index_1based - 1); }

    const NetworkPlan& plan() const noexcept { return plan_; }
    std::size_t effective_parameter_count() const;
    std::size_t total_parameter_count() const;

    void set_learning_rate(double lr) noexcept;

private:
    NetworkPlan plan_;
    std::vector<Component> components_;
};

}  // namespace al::core
