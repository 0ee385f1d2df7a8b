#pragma once

#include <cstdint>

#include "al/core/network.hpp"
#include "al/data/dataset.hpp"
#include "al/metrics/metrics.hpp"
#include "al/train/pipeline.hpp"

namespace al::train {

struct TrainOptions {
    std::size_t batch_size = 128;
    std::uint64_t seed = 0;
    std::size_t queue_capacity = 2;
    // Pipeline depth 1: batch m+1 enters only after batch m cleared the top component.
    bool barrier = false;
    int threads_per_worker = 0;
    bool evaluate_train_accuracy = true;
};

struct EpochOutcome {
    metrics::MetricsRecord metrics;
    PipelineRun run;
};

// Batch by batch, component 1 to C: each component updates on the batch and
// hands its detached (s_i, t_i), computed before its own update, upward.
EpochOutcome train_epoch_sequential(core::ALNetwork& net, const data::Dataset& train, std::size_t epoch,
                                    const TrainOptions& options);

// Same tasks, one worker per component, bounded queues between them.
// Component c handles batch m during time unit m + c - 1.
EpochOutcome train_epoch_pipelined(core::ALNetwork& net, const data::Dataset& train, std::size_t epoch,
                                   const TrainOptions& options);

struct BenchResult {
    std::size_t n_batches = 0;
    std::size_t components = 0;
    double task_cost_ms = 0.0;
    PipelineRun sequential;
    PipelineRun pipelined;
    double speedup = 0.0;  // sequential wall clock / pipelined wall clock
};

// Equal-cost synthetic tasks (each sleeps task_cost_ms) pushed through the
// pipeline engine and through the sequential loop.
BenchResult bench_pipeline(std::size_t n_batches, std::size_t components, double task_cost_ms,
                           std::size_t queue_capacity = 2);

}  // namespace al::train
