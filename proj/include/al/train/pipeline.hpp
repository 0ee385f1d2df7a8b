#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "al/linalg/matrix.hpp"
#include "al/train/schedule.hpp"

namespace al::train {

using linalg::Matrix;

// Payload travelling from component c to c+1: the detached (s, t) pair for
// one mini-batch. ready_time is the logical time unit at which the producer
// finished with it.
struct BatchMessage {
    std::size_t batch_id = 0;  // 1-based, strictly increasing along each queue
    std::size_t epoch = 0;
    Matrix s;
    Matrix t;
    std::size_t ready_time = 0;
};

// A stage consumes the message for its component and replaces s and t with
// the values the next component needs.
using Stage = std::function<void(BatchMessage&)>;
using Source = std::function<BatchMessage(std::size_t batch_id)>;

struct PipelineOptions {
    std::size_t queue_capacity = 2;
    // Admit batch m only after batch m-1 has left the last stage.
    bool barrier = false;
    // OpenMP threads per worker; 0 splits the available threads evenly.
    int threads_per_worker = 0;
};

struct ThroughputReport {
    double wall_clock_s = 0.0;
    std::size_t time_units = 0;
    std::size_t tasks = 0;
    std::vector<double> busy_fraction;  // per component, busy time / wall clock
    // Sum of per-worker busy time over wall clock; at most the component count.
    double speedup = 0.0;
};

struct PipelineRun {
    std::vector<TaskSlot> trace;  // sorted by (time_unit, component)
    ThroughputReport report;
};

// One worker thread per stage joined by bounded FIFO queues. A stage's
// logical finish time is one past the later of its own previous finish and
// the message's ready_time. Exceptions from any worker stop the pipeline and
// are rethrown here.
PipelineRun run_pipelined(std::size_t n_batches, const Source& source, std::vector<Stage>& stages,
                          const PipelineOptions& options = {});

// The same tasks in batch-major order on the calling thread.
PipelineRun run_sequential(std::size_t n_batches, const Source& source, std::vector<Stage>& stages);

}  // namespace al::train
