#include "al/train/fit.hpp"

#include <cmath>
#include <stdexcept>

#include "al/core/checkpoint.hpp"

namespace al::train {

double LrSchedule::lr_for_epoch(std::size_t epoch) const {
    std::size_t passed = 0;
    for (const auto d : drops)
        passed += d < epoch ? 1 : 0;
    return initial * std::pow(factor, static_cast<double>(passed));
}

std::string to_string(Mode mode) {
    switch (mode) {
    case Mode::AlSequential: return "al-seq";
    case Mode::AlPipelined: return "al-pipe";
    case Mode::Bp: return "bp";
    }
    return "?";
}

Mode parse_mode(const std::string& name) {
    if (name == "al-seq")
        return Mode::AlSequential;
    if (name == "al-pipe")
        return Mode::AlPipelined;
    if (name == "bp")
        return Mode::Bp;
    throw std::invalid_argument("unknown mode '" + name + "' (expected al-seq, al-pipe or bp)");
}

namespace {

double score(const metrics::MetricsRecord& m) { return m.test_accuracy.value_or(m.train_accuracy); }

template <typename Net, typename Step, typename Save>
FitResult run_fit(Net& net, const data::Dataset& train, const data::Dataset& test, const FitOptions& options,
                  Step step, Save save) {
    FitResult result;

    metrics::MetricsRecord initial;
    initial.epoch = 0;
    initial.mode = to_string(options.mode);
    initial.lr = options.schedule.lr_for_epoch(1);
    initial.train_accuracy = metrics::evaluate_accuracy(net, train);
    if (test.size() > 0)
        initial.test_accuracy = metrics::evaluate_accuracy(net, test);
    result.history.push_back(initial);
    result.best = initial;
    if (options.on_epoch)
        options.on_epoch(initial);

    for (std::size_t epoch = 1; epoch <= options.epochs; ++epoch) {
        net.set_learning_rate(options.schedule.lr_for_epoch(epoch));
        auto record = step(epoch, result);
        if (test.size() > 0)
            record.test_accuracy = metrics::evaluate_accuracy(net, test);
        result.history.push_back(record);
        if (epoch == 1 || score(record) > score(result.best)) {
            result.best = record;
            if (options.checkpoint)
                save(*options.checkpoint, epoch);
        }
        if (options.on_epoch)
            options.on_epoch(record);
    }
    result.final = result.history.back();
    return result;
}

}  // namespace

FitResult fit(core::ALNetwork& net, const data::Dataset& train, const data::Dataset& test,
              const FitOptions& options) {
    if (options.mode == Mode::Bp)
        throw std::invalid_argument("bp mode needs a BPNetwork");
    TrainOptions to;
    to.batch_size = options.batch_size;
    to.seed = options.seed;
    to.queue_capacity = options.queue_capacity;
    to.barrier = options.barrier;
    const bool pipelined = options.mode == Mode::AlPipelined;
    return run_fit(
        net, train, test, options,
        [&](std::size_t epoch, FitResult& result) {
            auto outcome = pipelined ? train_epoch_pipelined(net, train, epoch, to)
                                     : train_epoch_sequential(net, train, epoch, to);
            if (pipelined)
                result.last_throughput = outcome.run.report;
            return outcome.metrics;
        },
        [&](const std::filesystem::path& path, std::size_t epoch) {
            core::save_checkpoint(path, net, options.seed, epoch);
        });
}

FitResult fit(bp::BPNetwork& net, const data::Dataset& train, const data::Dataset& test,
              const FitOptions& options) {
    if (options.mode != Mode::Bp)
        throw std::invalid_argument("AL modes need an ALNetwork");
    bp::EpochOptions eo;
    eo.batch_size = options.batch_size;
    eo.seed = options.seed;
    return run_fit(
        net, train, test, options,
        [&](std::size_t epoch, FitResult&) { return bp::bp_train_epoch(net, train, epoch, eo); },
        [&](const std::filesystem::path& path, std::size_t epoch) {
            bp::save_checkpoint(path, net, options.seed, epoch);
        });
}

}  // namespace al::train
