#pragma once

#include <cstddef>
#include <vector>

namespace al::train {

// One task: `component` processes `batch` during `time_unit` (all 1-based).
struct TaskSlot {
    std::size_t time_unit = 0;
    std::size_t component = 0;
    std::size_t batch = 0;

    friend bool operator==(const TaskSlot&, const TaskSlot&) = default;
};

// Staggered schedule: at time u component c works on batch u - c + 1
// whenever 1 <= u - c + 1 <= n. Sorted by (time_unit, component).
std::vector<TaskSlot> pipeline_schedule(std::size_t n_batches, std::size_t n_components);
// One task per time unit: batch m at component c runs at (m - 1) * C + c.
std::vector<TaskSlot> sequential_schedule(std::size_t n_batches, std::size_t n_components);

// n + C - 1 (0 when there are no batches).
std::size_t pipelined_time_units(std::size_t n_batches, std::size_t n_components);
std::size_t sequential_time_units(std::size_t n_batches, std::size_t n_components);
// Last time unit used by a trace.
std::size_t makespan(const std::vector<TaskSlot>& trace);

}  // namespace al::train
