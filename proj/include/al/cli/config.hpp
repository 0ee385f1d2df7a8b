#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "al/data/dataset.hpp"
#include "al/train/fit.hpp"

namespace al::cli {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Everything a training run needs. Unset optionals fall back to per-dataset
// defaults during validation (see resolve()).
struct RunConfig {
    std::string dataset = "mnist-subset";  // mnist | mnist-subset | blobs | xor
    std::string data_dir;                  // MNIST directory; AL_DATA_DIR when empty
    std::optional<std::string> plan;
    std::string mode = "al-seq";  // al-seq | al-pipe | bp
    std::size_t epochs = 20;
    std::size_t batch_size = 128;
    std::optional<double> lr;
    std::vector<std::size_t> lr_drops{80, 120, 160, 180};
    double lr_factor = 0.5;
    std::optional<std::uint64_t> seed;
    std::string out = "run";
    std::string head_loss = "softmax-ce";
    std::size_t queue_capacity = 2;
};

nlohmann::json to_json(const RunConfig& config);
// Unknown keys are rejected so typos do not silently fall back to defaults.
RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_config_file(const std::string& path);

// Fills defaults, picks up AL_DATA_DIR, and checks every field. Throws ConfigError.
RunConfig resolve(RunConfig config);

data::Split load_dataset(const RunConfig& config);
train::FitOptions fit_options(const RunConfig& config);

}  // namespace al::cli
