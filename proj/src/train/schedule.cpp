#include "al/train/schedule.hpp"

#include <algorithm>

namespace al::train {

std::vector<TaskSlot> pipeline_schedule(std::size_t n, std::size_t c_count) {
    std::vector<TaskSlot> out;
    const std::size_t units = pipelined_time_units(n, c_count);
    for (std::size_t u = 1; u <= units; ++u)
        for (std::size_t c = 1; c <= c_count; ++c)
            if (u + 1 > c && u + 1 - c <= n)
                out.push_back({u, c, u + 1 - c});
    return out;
}

std::vector<TaskSlot> sequential_schedule(std::size_t n, std::size_t c_count) {
    std::vector<TaskSlot> out;
    for (std::size_t m = 1; m <= n; ++m)
        for (std::size_t c = 1; c <= c_count; ++c)
            out.push_back({(m - 1) * c_count + c, c, m});
    return out;
}

std::size_t pipelined_time_units(std::size_t n, std::size_t c_count) {
    return n == 0 || c_count == 0 ? 0 : n + c_count - 1;
}

std::size_t sequential_time_units(std::size_t n, std::size_t c_count) { return n * c_count; }

std::size_t makespan(const std::vector<TaskSlot>& trace) {
    std::size_t last = 0;
    for (const auto& t : trace)
        last = std::max(last, t.time_unit);
    return last;
}

}  // namespace al::train
