#include "al/cli/config.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>

namespace al::cli {

namespace fs = std::filesystem;

nlohmann::json to_json(const RunConfig& c) {
    nlohmann::json j{{"dataset", c.dataset},
                     {"data_dir", c.data_dir},
                     {"mode", c.mode},
                     {"epochs", c.epochs},
                     {"batch_size", c.batch_size},
                     {"lr_drops", c.lr_drops},
                     {"lr_factor", c.lr_factor},
                     {"out", c.out},
                     {"head_loss", c.head_loss},
                     {"queue_capacity", c.queue_capacity}};
    j["plan"] = c.plan ? nlohmann::json(*c.plan) : nlohmann::json();
    j["lr"] = c.lr ? nlohmann::json(*c.lr) : nlohmann::json();
    j["seed"] = c.seed ? nlohmann::json(*c.seed) : nlohmann::json();
    return j;
}

RunConfig config_from_json(const nlohmann::json& j) {
    if (!j.is_object())
        throw ConfigError("config must be a JSON object");
    RunConfig c;
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "dataset")
                c.dataset = value.get<std::string>();
            else if (key == "data_dir")
                c.data_dir = value.get<std::string>();
            else if (key == "plan")
                c.plan = value.is_null() ? std::nullopt : std::optional(value.get<std::string>());
            else if (key == "mode")
                c.mode = value.get<std::string>();
            else if (key == "epochs")
                c.epochs = value.get<std::size_t>();
            else if (key == "batch_size")
                c.batch_size = value.get<std::size_t>();
            else if (key == "lr")
                c.lr = value.is_null() ? std::nullopt : std::optional(value.get<double>());
            else if (key == "lr_drops")
                c.lr_drops = value.get<std::vector<std::size_t>>();
            else if (key == "lr_factor")
                c.lr_factor = value.get<double>();
            else if (key == "seed")
                c.seed = value.is_null() ? std::nullopt : std::optional(value.get<std::uint64_t>());
            else if (key == "out")
                c.out = value.get<std::string>();
            else if (key == "head_loss")
                c.head_loss = value.get<std::string>();
            else if (key == "queue_capacity")
                c.queue_capacity = value.get<std::size_t>();
            else
                throw ConfigError("unknown config key '" + key + "'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad config value: ") + e.what());
    }
    return c;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file " + path);
    try {
        return config_from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config file " + path + " is not valid JSON: " + e.what());
    }
}

namespace {

bool is_mnist(const std::string& dataset) { return dataset == "mnist" || dataset == "mnist-subset"; }

}  // namespace

RunConfig resolve(RunConfig c) {
    if (!c.seed)
        throw ConfigError("--seed is required");
    if (!is_mnist(c.dataset) && c.dataset != "blobs" && c.dataset != "xor")
        throw ConfigError("unknown dataset '" + c.dataset + "' (expected mnist, mnist-subset, blobs or xor)");
    try {
        train::parse_mode(c.mode);
        bp::parse_head_loss(c.head_loss);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (c.batch_size == 0)
        throw ConfigError("batch size must be positive");
    if (c.queue_capacity == 0)
        throw ConfigError("queue capacity must be positive");
    if (!(c.lr_factor > 0.0 && c.lr_factor <= 1.0))
        throw ConfigError("lr factor must be in (0, 1]");

    // Small synthetic problems get a small network and a larger step.
    const bool synthetic = !is_mnist(c.dataset);
    if (!c.plan)
        c.plan = synthetic ? "tiny" : "desk-mlp";
    if (!c.lr)
        c.lr = synthetic ? 1e-2 : 1e-4;
    if (!(*c.lr >= 0.0))
        throw ConfigError("learning rate must be non-negative");

    if (is_mnist(c.dataset)) {
        if (c.data_dir.empty())
            if (const char* env = std::getenv("AL_DATA_DIR"))
                c.data_dir = env;
        if (c.data_dir.empty())
            throw ConfigError("MNIST needs --data-dir or AL_DATA_DIR");
        if (!fs::is_directory(c.data_dir))
            throw ConfigError("data directory " + c.data_dir + " does not exist");
        if (!data::has_mnist(c.data_dir))
            throw ConfigError("no MNIST IDX files in " + c.data_dir);
    }
    if (c.out.empty())
        throw ConfigError("output directory must be set");
    return c;
}

data::Split load_dataset(const RunConfig& c) {
    if (c.dataset == "mnist")
        return data::load_mnist(c.data_dir);
    if (c.dataset == "mnist-subset")
        return data::load_mnist_subset(c.data_dir);
    if (c.dataset == "xor") {
        auto xor_data = data::synth_xor();
        return {xor_data, xor_data};
    }
    linalg::Rng rng(c.seed.value_or(0));
    auto train_rng = rng.derive(1);
    auto test_rng = rng.derive(2);
    return {data::synth_blobs(600, 2, 3, 4.0, train_rng), data::synth_blobs(300, 2, 3, 4.0, test_rng)};
}

train::FitOptions fit_options(const RunConfig& c) {
    train::FitOptions o;
    o.epochs = c.epochs;
    o.batch_size = c.batch_size;
    o.schedule.initial = c.lr.value_or(1e-4);
    o.schedule.drops = c.lr_drops;
    o.schedule.factor = c.lr_factor;
    o.mode = train::parse_mode(c.mode);
    o.seed = c.seed.value_or(0);
    o.queue_capacity = c.queue_capacity;
    return o;
}

}  // namespace al::cli
