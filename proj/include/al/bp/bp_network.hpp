#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "al/core/network.hpp"
#include "al/data/dataset.hpp"
#include "al/metrics/metrics.hpp"
#include "al/nn/adam.hpp"
#include "al/nn/grad_check.hpp"

namespace al::bp {

using linalg::Matrix;

enum class HeadLoss {
    SoftmaxCrossEntropy,  // default head
    SigmoidMse,           // MSE against one-hot, like the AL decoders
};

std::string to_string(HeadLoss loss);
HeadLoss parse_head_loss(const std::string& name);

struct BPPlan {
    std::size_t input_dim = 0;
    std::vector<std::size_t> widths;  // hidden widths then the output width
    HeadLoss loss = HeadLoss::SoftmaxCrossEntropy;

    std::size_t parameter_count() const;
};

// The BP stack mirroring the AL inference path f_1..f_C, b_C, h_C..h_1,
// layer for layer, so both have the same trainable parameter count.
BPPlan match_effective_params(const core::NetworkPlan& al_plan, HeadLoss loss = HeadLoss::SoftmaxCrossEntropy);

nlohmann::json to_json(const BPPlan& plan);
BPPlan bp_plan_from_json(const nlohmann::json& j);

// End-to-end network: ELU hidden layers and a softmax (or sigmoid) head.
class BPNetwork {
public:
    BPNetwork(const BPPlan& plan, linalg::Rng& rng, nn::AdamConfig adam = {});

    core::Prediction infer(const Matrix& x) const;
    // Output of the first `layers` dense layers.
    Matrix hidden_features(const Matrix& x, std::size_t layers) const;

    double loss(const Matrix& x, const Matrix& target) const;
    // Training-mode forward and full backward; returns the batch loss.
    double gradients(const Matrix& x, const Matrix& target, nn::BlockGrads& grads);
    double train_batch(const Matrix& x, const Matrix& target);

    nn::MLPBlock& stack() noexcept { return stack_; }
    const nn::MLPBlock& stack() const noexcept { return stack_; }
    const BPPlan& plan() const noexcept { return plan_; }
    std::size_t parameter_count() const noexcept { return stack_.parameter_count(); }

    void set_learning_rate(double lr) noexcept { adam_.config.lr = lr; }
    double learning_rate() const noexcept { return adam_.config.lr; }

private:
    BPPlan plan_;
    nn::MLPBlock stack_;
    nn::AdamState adam_;
};

struct EpochOptions {
    std::size_t batch_size = 128;
    std::uint64_t seed = 0;
};

// One pass over `train` in seeded shuffled batches. Reports the mean batch
// loss and the post-epoch training accuracy.
metrics::MetricsRecord bp_train_epoch(BPNetwork& net, const data::Dataset& train, std::size_t epoch,
                                      const EpochOptions& options);

// Finite differences of the batch loss against every weight and bias of the
// whole stack, compared with BPNetwork::gradients.
nn::GradCheckResult check_bp_gradients(BPNetwork& net, const Matrix& x, const Matrix& target, double eps = 1e-5,
                                       double planted_fault = 0.0);

void save_checkpoint(const std::filesystem::path& path, const BPNetwork& net, std::uint64_t seed,
                     std::size_t epoch);
BPNetwork load_bp_checkpoint(const std::filesystem::path& path, nlohmann::json* header = nullptr);

}  // namespace al::bp
