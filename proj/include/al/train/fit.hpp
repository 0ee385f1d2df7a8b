#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "al/bp/bp_network.hpp"
#include "al/core/network.hpp"
#include "al/data/dataset.hpp"
#include "al/metrics/metrics.hpp"
#include "al/train/trainer.hpp"

namespace al::train {

// Step schedule: the rate is multiplied by `factor` once each listed epoch
// has completed.
struct LrSchedule {
    double initial = 1e-4;
    std::vector<std::size_t> drops{80, 120, 160, 180};
    double factor = 0.5;

    // Rate used while running epoch `epoch` (1-based).
    double lr_for_epoch(std::size_t epoch) const;
};

enum class Mode { AlSequential, AlPipelined, Bp };

std::string to_string(Mode mode);
Mode parse_mode(const std::string& name);

struct FitOptions {
    std::size_t epochs = 20;
    std::size_t batch_size = 128;
    LrSchedule schedule;
    Mode mode = Mode::AlSequential;
    std::uint64_t seed = 0;
    std::size_t queue_capacity = 2;
    bool barrier = false;
    // Best-by-test-accuracy checkpoint; nothing is written when unset.
    std::optional<std::filesystem::path> checkpoint;
    std::function<void(const metrics::MetricsRecord&)> on_epoch;
};

struct FitResult {
    std::vector<metrics::MetricsRecord> history;  // entry 0 is the untrained model
    metrics::MetricsRecord final;
    metrics::MetricsRecord best;
    std::optional<ThroughputReport> last_throughput;  // pipelined mode only
};

// `test` may be empty, in which case the best epoch is judged on training accuracy.
FitResult fit(core::ALNetwork& net, const data::Dataset& train, const data::Dataset& test,
              const FitOptions& options);
FitResult fit(bp::BPNetwork& net, const data::Dataset& train, const data::Dataset& test,
              const FitOptions& options);

}  // namespace al::train
