#include "al/train/pipeline.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <condition_variable>
#include <exception>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "al/train/queue.hpp"

namespace al::train {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

ThroughputReport summarize(const std::vector<TaskSlot>& trace, const std::vector<double>& busy, double wall) {
    ThroughputReport r;
    r.wall_clock_s = wall;
    r.time_units = makespan(trace);
    r.tasks = trace.size();
    double total = 0.0;
    for (double b : busy) {
        r.busy_fraction.push_back(wall > 0.0 ? b / wall : 0.0);
        total += b;
    }
    r.speedup = wall > 0.0 ? total / wall : 0.0;
    return r;
}

void sort_trace(std::vector<TaskSlot>& trace) {
    std::sort(trace.begin(), trace.end(), [](const TaskSlot& a, const TaskSlot& b) {
        return a.time_unit != b.time_unit ? a.time_unit < b.time_unit : a.component < b.component;
    });
}

}  // namespace

PipelineRun run_pipelined(std::size_t n_batches, const Source& source, std::vector<Stage>& stages,
                          const PipelineOptions& options) {
    const std::size_t count = stages.size();
    if (count == 0)
        throw std::invalid_argument("pipeline needs at least one stage");

    std::vector<std::unique_ptr<BoundedQueue<BatchMessage>>> queues;
    for (std::size_t c = 0; c < count; ++c)
        queues.push_back(std::make_unique<BoundedQueue<BatchMessage>>(options.queue_capacity));

    std::vector<std::vector<TaskSlot>> traces(count);
    std::vector<double> busy(count, 0.0);

    std::mutex state_mutex;
    std::condition_variable drained;
    std::size_t completed = 0;
    std::size_t last_finish = 0;
    std::exception_ptr failure;

    const auto abort_all = [&](std::exception_ptr e) {
        {
            std::lock_guard lock(state_mutex);
            if (!failure)
                failure = e;
        }
        drained.notify_all();
        for (auto& q : queues)
            q->close();
    };

    int threads = options.threads_per_worker;
    if (threads <= 0)
        threads = std::max(1, omp_get_max_threads() / static_cast<int>(count));

    const auto start = Clock::now();
    std::vector<std::thread> workers;
    workers.reserve(count);
    for (std::size_t c = 0; c < count; ++c) {
        workers.emplace_back([&, c] {
            omp_set_num_threads(threads);
            std::size_t previous_batch = 0;
            std::size_t own_finish = 0;
            try {
                while (auto msg = queues[c]->pop()) {
                    if (msg->batch_id <= previous_batch)
                        throw std::logic_error("component " + std::to_string(c + 1) + " received batch " +
                                               std::to_string(msg->batch_id) + " after batch " +
                                               std::to_string(previous_batch));
                    previous_batch = msg->batch_id;
                    const auto t0 = Clock::now();
                    stages[c](*msg);
                    busy[c] += seconds_since(t0);
                    own_finish = std::max(own_finish, msg->ready_time) + 1;
                    msg->ready_time = own_finish;
                    traces[c].push_back({own_finish, c + 1, msg->batch_id});
                    if (c + 1 < count) {
                        if (!queues[c + 1]->push(std::move(*msg)))
                            return;
                    } else {
                        std::lock_guard lock(state_mutex);
                        ++completed;
                        last_finish = own_finish;
                        drained.notify_all();
                    }
                }
                if (c + 1 < count)
                    queues[c + 1]->close();
            } catch (...) {
                abort_all(std::current_exception());
            }
        });
    }

    try {
        for (std::size_t m = 1; m <= n_batches; ++m) {
            std::size_t ready = 0;
            if (options.barrier) {
                std::unique_lock lock(state_mutex);
                drained.wait(lock, [&] { return failure || completed == m - 1; });
                if (failure)
                    break;
                ready = last_finish;
            }
            BatchMessage msg = source(m);
            msg.batch_id = m;
            msg.ready_time = ready;
            if (!queues[0]->push(std::move(msg)))
                break;
        }
    } catch (...) {
        abort_all(std::current_exception());
    }
    queues[0]->close();
    for (auto& w : workers)
        w.join();
    if (failure)
        std::rethrow_exception(failure);

    PipelineRun run;
    for (auto& t : traces)
        run.trace.insert(run.trace.end(), t.begin(), t.end());
    sort_trace(run.trace);
    run.report = summarize(run.trace, busy, seconds_since(start));
    return run;
}

PipelineRun run_sequential(std::size_t n_batches, const Source& source, std::vector<Stage>& stages) {
    std::vector<double> busy(stages.size(), 0.0);
    PipelineRun run;
    std::size_t clock = 0;
    const auto start = Clock::now();
    for (std::size_t m = 1; m <= n_batches; ++m) {
        BatchMessage msg = source(m);
        msg.batch_id = m;
        for (std::size_t c = 0; c < stages.size(); ++c) {
            const auto t0 = Clock::now();
            stages[c](msg);
            busy[c] += seconds_since(t0);
            msg.ready_time = ++clock;
            run.trace.push_back({clock, c + 1, m});
        }
    }
    sort_trace(run.trace);
    run.report = summarize(run.trace, busy, seconds_since(start));
    return run;
}

}  // namespace al::train
