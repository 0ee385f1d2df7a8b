#include "al/train/trainer.hpp"

#include <chrono>
#include <thread>

#include "al/nn/errors.hpp"

namespace al::train {

namespace {

struct Accumulator {
    double mse1 = 0.0;
    double mse2 = 0.0;
    std::size_t rows = 0;
};

std::vector<Stage> make_stages(core::ALNetwork& net, std::vector<Accumulator>& acc) {
    std::vector<Stage> stages;
    for (std::size_t i = 0; i < net.component_count(); ++i) {
        core::Component* comp = &net.components()[i];
        Accumulator* slot = &acc[i];
        stages.emplace_back([comp, slot](BatchMessage& msg) {
            core::ComponentOutput out;
            try {
                out = comp->update(msg.s, msg.t);
            } catch (const nn::NumericError& e) {
                throw nn::NumericError(std::string(e.what()) + " (epoch " + std::to_string(msg.epoch) + ", batch " +
                                           std::to_string(msg.batch_id) + ")",
                                       comp->index(), msg.batch_id);
            }
            const auto rows = static_cast<double>(msg.s.rows());
            slot->mse1 += out.losses.mse1 * rows;
            slot->mse2 += out.losses.mse2 * rows;
            slot->rows += msg.s.rows();
            msg.s = std::move(out.s);
            msg.t = std::move(out.t);
        });
    }
    return stages;
}

EpochOutcome run_epoch(core::ALNetwork& net, const data::Dataset& train, std::size_t epoch,
                       const TrainOptions& options, bool pipelined) {
    const auto start = std::chrono::steady_clock::now();
    data::BatchIterator it(train.size(), options.batch_size, options.seed);
    it.start_epoch(epoch);
    std::vector<std::vector<std::size_t>> batches;
    for (auto idx = it.next(); !idx.empty(); idx = it.next())
        batches.emplace_back(idx.begin(), idx.end());

    const Source source = [&](std::size_t batch_id) {
        const auto b = data::make_batch(train, batches[batch_id - 1]);
        BatchMessage msg;
        msg.epoch = epoch;
        msg.s = b.x;
        msg.t = b.t;
        return msg;
    };

    std::vector<Accumulator> acc(net.component_count());
    auto stages = make_stages(net, acc);

    EpochOutcome outcome;
    if (pipelined) {
        PipelineOptions po;
        po.queue_capacity = options.queue_capacity;
        po.barrier = options.barrier;
        po.threads_per_worker = options.threads_per_worker;
        outcome.run = run_pipelined(batches.size(), source, stages, po);
    } else {
        outcome.run = run_sequential(batches.size(), source, stages);
    }

    auto& m = outcome.metrics;
    m.epoch = epoch;
    m.mode = pipelined ? "al-pipe" : "al-seq";
    m.lr = net.components().front().learning_rate();
    double objective = 0.0;
    for (std::size_t i = 0; i < acc.size(); ++i) {
        const double rows = static_cast<double>(std::max<std::size_t>(acc[i].rows, 1));
        core::LossRecord rec{i + 1, acc[i].mse1 / rows, acc[i].mse2 / rows};
        objective += rec.local_objective();
        m.components.push_back(rec);
    }
    m.train_loss = objective;
    if (options.evaluate_train_accuracy)
        m.train_accuracy = metrics::evaluate_accuracy(net, train);
    m.wall_clock_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return outcome;
}

}  // namespace

EpochOutcome train_epoch_sequential(core::ALNetwork& net, const data::Dataset& train, std::size_t epoch,
                                    const TrainOptions& options) {
    return run_epoch(net, train, epoch, options, false);
}

EpochOutcome train_epoch_pipelined(core::ALNetwork& net, const data::Dataset& train, std::size_t epoch,
                                   const TrainOptions& options) {
    return run_epoch(net, train, epoch, options, true);
}

BenchResult bench_pipeline(std::size_t n_batches, std::size_t components, double task_cost_ms,
                           std::size_t queue_capacity) {
    if (components == 0)
        throw std::invalid_argument("bench_pipeline needs at least one component");
    const auto cost = std::chrono::duration<double, std::milli>(task_cost_ms);
    std::vector<Stage> stages(components, [cost](BatchMessage&) { std::this_thread::sleep_for(cost); });
    const Source source = [](std::size_t) { return BatchMessage{}; };

    BenchResult r;
    r.n_batches = n_batches;
    r.components = components;
    r.task_cost_ms = task_cost_ms;
    r.sequential = run_sequential(n_batches, source, stages);
    PipelineOptions po;
    po.queue_capacity = queue_capacity;
    po.threads_per_worker = 1;
    r.pipelined = run_pipelined(n_batches, source, stages, po);
    r.speedup = r.pipelined.report.wall_clock_s > 0.0
                    ? r.sequential.report.wall_clock_s / r.pipelined.report.wall_clock_s
                    : 0.0;
    return r;
}

}  // namespace al::train
