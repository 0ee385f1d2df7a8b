#include "al/bp/bp_network.hpp"

#include <chrono>
#include <cmath>

#include "al/core/checkpoint.hpp"
#include "al/nn/errors.hpp"
#include "al/nn/loss.hpp"

namespace al::bp {

std::string to_string(HeadLoss loss) {
    return loss == HeadLoss::SoftmaxCrossEntropy ? "softmax-ce" : "sigmoid-mse";
}

HeadLoss parse_head_loss(const std::string& name) {
    if (name == "softmax-ce") return HeadLoss::SoftmaxCrossEntropy;
    if (name == "sigmoid-mse") return HeadLoss::SigmoidMse;
    throw std::invalid_argument("unknown BP head loss '" + name + "'");
}

std::size_t BPPlan::parameter_count() const {
    std::size_t n = 0;
    std::size_t in = input_dim;
    for (std::size_t w : widths) {
        n += in * w + w;
        in = w;
    }
    return n;
}

BPPlan match_effective_params(const core::NetworkPlan& al_plan, HeadLoss loss) {
    al_plan.validate();
    const auto comps = al_plan.components();
    BPPlan plan;
    plan.input_dim = al_plan.input_dim;
    plan.loss = loss;
    const auto append = [&](const std::vector<std::size_t>& widths) {
        plan.widths.insert(plan.widths.end(), widths.begin() + 1, widths.end());
    };
    for (const auto& d : comps)
        append(core::f_widths(d, al_plan.depths));
    append(core::b_widths(comps.back(), al_plan.depths));
    for (auto it = comps.rbegin(); it != comps.rend(); ++it)
        append(core::h_widths(*it, al_plan.depths));
    return plan;
}

nlohmann::json to_json(const BPPlan& plan) {
    return {{"input_dim", plan.input_dim}, {"widths", plan.widths}, {"loss", to_string(plan.loss)}};
}

BPPlan bp_plan_from_json(const nlohmann::json& j) {
    BPPlan plan;
    plan.input_dim = j.at("input_dim").get<std::size_t>();
    plan.widths = j.at("widths").get<std::vector<std::size_t>>();
    plan.loss = parse_head_loss(j.at("loss").get<std::string>());
    return plan;
}

BPNetwork::BPNetwork(const BPPlan& plan, linalg::Rng& rng, nn::AdamConfig adam) : plan_(plan), adam_(adam) {
    if (plan.input_dim == 0 || plan.widths.empty())
        throw core::PlanError("BP plan needs an input width and at least one layer");
    std::vector<std::size_t> widths{plan.input_dim};
    widths.insert(widths.end(), plan.widths.begin(), plan.widths.end());
    const auto head = plan.loss == HeadLoss::SoftmaxCrossEntropy ? nn::Activation::Softmax : nn::Activation::Sigmoid;
    stack_ = nn::MLPBlock::make(widths, nn::Activation::Elu, head, rng);
}

core::Prediction BPNetwork::infer(const Matrix& x) const {
    core::Prediction p;
    p.scores = stack_.infer(x);
    p.classes = linalg::row_argmax(p.scores);
    return p;
}

Matrix BPNetwork::hidden_features(const Matrix& x, std::size_t layers) const {
    if (layers > stack_.depth())
        throw std::out_of_range("hidden_features: stack has only " + std::to_string(stack_.depth()) + " layers");
    Matrix h = x;
    for (std::size_t i = 0; i < layers; ++i)
        h = stack_.layers()[i].infer(h);
    return h;
}

double BPNetwork::loss(const Matrix& x, const Matrix& target) const {
    const Matrix out = stack_.infer(x);
    return plan_.loss == HeadLoss::SoftmaxCrossEntropy ? nn::cross_entropy_loss(out, target)
                                                       : nn::mse_loss(out, target);
}

double BPNetwork::gradients(const Matrix& x, const Matrix& target, nn::BlockGrads& grads) {
    const Matrix out = stack_.forward(x, true);
    if (!linalg::all_finite(out))
        throw nn::NumericError("bp: non-finite network output");
    if (plan_.loss == HeadLoss::SoftmaxCrossEntropy) {
        grads = stack_.backward_preactivation(nn::softmax_cross_entropy_grad(out, target));
        return nn::cross_entropy_loss(out, target);
    }
    grads = stack_.backward(nn::mse_grad(out, target));
    return nn::mse_loss(out, target);
}

double BPNetwork::train_batch(const Matrix& x, const Matrix& target) {
    nn::BlockGrads grads;
    const double value = gradients(x, target, grads);
    nn::adam_update(stack_, grads, adam_);
    return value;
}

metrics::MetricsRecord bp_train_epoch(BPNetwork& net, const data::Dataset& train, std::size_t epoch,
                                      const EpochOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    data::BatchIterator batches(train.size(), options.batch_size, options.seed);
    batches.start_epoch(epoch);
    double loss_total = 0.0;
    std::size_t batch_index = 1;
    for (auto idx = batches.next(); !idx.empty(); idx = batches.next(), ++batch_index) {
        const auto batch = data::make_batch(train, idx);
        double value = 0.0;
        try {
            value = net.train_batch(batch.x, batch.t);
        } catch (const nn::NumericError& e) {
            throw nn::NumericError(std::string(e.what()) + " (epoch " + std::to_string(epoch) + ", batch " +
                                       std::to_string(batch_index) + ")",
                                   std::nullopt, batch_index);
        }
        if (!std::isfinite(value))
            throw nn::NumericError("bp: loss diverged at epoch " + std::to_string(epoch) + ", batch " +
                                       std::to_string(batch_index),
                                   std::nullopt, batch_index);
        loss_total += value * static_cast<double>(idx.size());
    }
    metrics::MetricsRecord record;
    record.epoch = epoch;
    record.mode = "bp";
    record.lr = net.learning_rate();
    record.train_loss = loss_total / static_cast<double>(std::max<std::size_t>(train.size(), 1));
    record.train_accuracy = metrics::evaluate_accuracy(net, train);
    record.wall_clock_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return record;
}

nn::GradCheckResult check_bp_gradients(BPNetwork& net, const Matrix& x, const Matrix& target, double eps,
                                       double planted_fault) {
    nn::BlockGrads grads;
    net.gradients(x, target, grads);
    if (planted_fault != 0.0 && !grads.layers.empty())
        grads.layers.front().weights.data()[0] += planted_fault;
    auto params = net.stack().parameters();
    const auto analytic = nn::flatten(grads);
    return nn::check_gradients([&] { return net.loss(x, target); }, params, analytic, eps);
}

void save_checkpoint(const std::filesystem::path& path, const BPNetwork& net, std::uint64_t seed,
                     std::size_t epoch) {
    std::vector<core::NamedTensor> tensors;
    core::append_block(tensors, "layers", net.stack());
    nlohmann::json header{{"tag", "bp"}, {"plan", to_json(net.plan())}, {"seed", seed}, {"epoch", epoch}};
    core::write_checkpoint(path, std::move(header), tensors);
}

BPNetwork load_bp_checkpoint(const std::filesystem::path& path, nlohmann::json* header) {
    const auto data = core::read_checkpoint(path);
    if (data.header.value("tag", std::string()) != "bp")
        throw core::CheckpointError("checkpoint " + path.string() + " is not a BP checkpoint");
    linalg::Rng rng(0);
    BPNetwork net(bp_plan_from_json(data.header.at("plan")), rng);
    std::size_t cursor = 0;
    core::restore_block(data, cursor, "layers", net.stack());
    if (header)
        *header = data.header;
    return net;
}

}  // namespace al::bp
