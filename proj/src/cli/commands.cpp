#include "al/cli/commands.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>

#include <CLI11.hpp>

#include "al/bp/bp_network.hpp"
#include "al/cli/config.hpp"
#include "al/core/al_grad_check.hpp"
#include "al/core/checkpoint.hpp"
#include "al/core/plan.hpp"
#include "al/metrics/report.hpp"
#include "al/nn/errors.hpp"
#include "al/train/trainer.hpp"

namespace al::cli {

namespace fs = std::filesystem;
using linalg::Matrix;

namespace {

constexpr double kFault = 1e-2;

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

GradcheckRow make_row(std::string suite, std::string component, std::string block, std::string flow,
                      bool expect_zero, const nn::GradCheckResult& r) {
    GradcheckRow row{std::move(suite), std::move(component), std::move(block), std::move(flow), expect_zero,
                     r.max_rel_error, r.max_numeric, r.checked, false};
    row.pass = expect_zero ? r.max_numeric < kCrossComponentTolerance : r.max_rel_error < kGradTolerance;
    return row;
}

}  // namespace

GradcheckSummary run_gradcheck(const GradcheckOptions& options) {
    GradcheckSummary summary;
    linalg::Rng rng(options.seed);
    const double fault = options.inject_fault ? kFault : 0.0;

    struct BlockCase {
        const char* name;
        std::vector<std::size_t> widths;
        nn::Activation hidden;
        nn::Activation output;
    };
    const std::size_t d = options.input_dim;
    const std::vector<BlockCase> cases{
        {"elu-sigmoid", {d, 5, 4}, nn::Activation::Elu, nn::Activation::Sigmoid},
        {"sigmoid", {d, 5, 5, 3}, nn::Activation::Sigmoid, nn::Activation::Sigmoid},
        {"elu-softmax", {d, 4, 3}, nn::Activation::Elu, nn::Activation::Softmax},
        {"elu-identity", {d, 3}, nn::Activation::Elu, nn::Activation::Identity},
    };
    for (std::size_t i = 0; i < cases.size(); ++i) {
        auto block = nn::MLPBlock::make(cases[i].widths, cases[i].hidden, cases[i].output, rng);
        nn::BlockCheckOptions bo;
        bo.planted_fault = i == 0 ? fault : 0.0;
        summary.rows.push_back(make_row("nn", "", cases[i].name, "sum(out*R)", false, nn::grad_check(block, rng, bo)));
    }

    const auto plan = core::make_plan(options.plan, options.input_dim, options.classes);
    auto net = core::ALNetwork::build(plan, rng);
    const Matrix x = linalg::normal_matrix(options.batch, options.input_dim, rng);
    std::vector<std::size_t> labels(options.batch);
    for (auto& l : labels)
        l = rng.index(options.classes);
    const Matrix t0 = data::one_hot(labels, options.classes);

    core::ALCheckOptions ao;
    ao.planted_fault = fault;
    for (const auto& r : core::check_al_gradients(net, x, t0, ao).rows)
        summary.rows.push_back(make_row("al", std::to_string(r.component), r.block, r.flow, r.expect_zero, r.result));

    for (const auto head : {bp::HeadLoss::SoftmaxCrossEntropy, bp::HeadLoss::SigmoidMse}) {
        bp::BPNetwork bpnet(bp::match_effective_params(plan, head), rng);
        summary.rows.push_back(make_row("bp", "", "stack", bp::to_string(head), false,
                                        bp::check_bp_gradients(bpnet, x, t0, 1e-5, fault)));
    }

    for (const auto& row : summary.rows) {
        if (row.expect_zero)
            summary.max_cross_component = std::max(summary.max_cross_component, row.max_numeric);
        else
            summary.max_rel_error = std::max(summary.max_rel_error, row.max_rel_error);
        summary.pass = summary.pass && row.pass;
    }
    return summary;
}

namespace {

void print_gradcheck(const GradcheckSummary& s, std::ostream& out) {
    char line[256];
    std::snprintf(line, sizeof line, "%-5s %-4s %-13s %-16s %8s %12s %12s  %s\n", "suite", "comp", "block", "flow",
                  "checked", "rel_err", "|numeric|", "status");
    out << line;
    for (const auto& r : s.rows) {
        std::snprintf(line, sizeof line, "%-5s %-4s %-13s %-16s %8zu %12.3e %12.3e  %s\n", r.suite.c_str(),
                      r.component.empty() ? "-" : r.component.c_str(), r.block.c_str(), r.flow.c_str(), r.checked,
                      r.expect_zero ? 0.0 : r.max_rel_error, r.max_numeric, r.pass ? "ok" : "FAIL");
        out << line;
    }
    out << "max relative error " << fmt("%.3e", s.max_rel_error) << " (limit " << fmt("%.0e", kGradTolerance)
        << "), max cross-component gradient " << fmt("%.3e", s.max_cross_component) << " (limit "
        << fmt("%.0e", kCrossComponentTolerance) << ")\n";
    out << (s.pass ? "gradcheck passed\n" : "gradcheck FAILED\n");
}

struct TrainFlags {
    std::string config_file;
    RunConfig values;
    std::string lr_drops;
};

std::vector<std::size_t> parse_drops(const std::string& text) {
    std::vector<std::size_t> drops;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const auto comma = text.find(',', pos);
        const auto item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (!item.empty()) {
            std::size_t used = 0;
            unsigned long long v = 0;
            try {
                v = std::stoull(item, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != item.size())
                throw ConfigError("bad --lr-drops entry '" + item + "'");
            drops.push_back(static_cast<std::size_t>(v));
        }
        if (comma == std::string::npos)
            break;
        pos = comma + 1;
    }
    return drops;
}

int cmd_train(const CLI::App& app, const TrainFlags& flags, std::ostream& out, std::ostream& err) {
    const auto given = [&](const char* name) { return app.get_option(name)->count() > 0; };
    RunConfig config;
    try {
        if (!flags.config_file.empty())
            config = load_config_file(flags.config_file);
        const auto& v = flags.values;
        if (given("--dataset")) config.dataset = v.dataset;
        if (given("--data-dir")) config.data_dir = v.data_dir;
        if (given("--plan")) config.plan = v.plan;
        if (given("--mode")) config.mode = v.mode;
        if (given("--epochs")) config.epochs = v.epochs;
        if (given("--batch-size")) config.batch_size = v.batch_size;
        if (given("--lr")) config.lr = v.lr;
        if (given("--lr-drops")) config.lr_drops = parse_drops(flags.lr_drops);
        if (given("--lr-factor")) config.lr_factor = v.lr_factor;
        if (given("--seed")) config.seed = v.seed;
        if (given("--out")) config.out = v.out;
        if (given("--head-loss")) config.head_loss = v.head_loss;
        if (given("--queue-capacity")) config.queue_capacity = v.queue_capacity;
        config = resolve(config);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    }

    data::Split split;
    core::NetworkPlan plan;
    try {
        split = load_dataset(config);
        plan = core::make_plan(*config.plan, split.train.dim(), split.train.n_classes);
    } catch (const data::DataError& e) {
        err << "data error: " << e.what() << "\n";
        return kConfigError;
    } catch (const core::PlanError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    }

    const fs::path dir(config.out);
    const fs::path checkpoint = dir / "checkpoint.bin";
    try {
        fs::create_directories(dir);
        fs::remove(checkpoint);
    } catch (const fs::filesystem_error& e) {
        err << "cannot prepare output directory: " << e.what() << "\n";
        return kConfigError;
    }
    metrics::write_json(dir / "config.json", to_json(config));

    auto options = fit_options(config);
    options.checkpoint = checkpoint;
    options.on_epoch = [&](const metrics::MetricsRecord& m) {
        out << "epoch " << m.epoch << "/" << config.epochs << "  lr " << fmt("%.3g", m.lr);
        if (m.train_loss)
            out << "  loss " << fmt("%.5f", *m.train_loss);
        out << "  train " << fmt("%.4f", m.train_accuracy);
        if (m.test_accuracy)
            out << "  test " << fmt("%.4f", *m.test_accuracy);
        out << std::endl;
    };

    const nn::AdamConfig adam{.lr = options.schedule.initial};
    linalg::Rng rng(*config.seed);
    nlohmann::json summary{{"config", to_json(config)}, {"plan", core::to_json(plan)}};
    const auto start = std::chrono::steady_clock::now();
    train::FitResult result;
    try {
        if (options.mode == train::Mode::Bp) {
            bp::BPNetwork net(bp::match_effective_params(plan, bp::parse_head_loss(config.head_loss)), rng, adam);
            summary["bp_plan"] = bp::to_json(net.plan());
            summary["parameters"] = net.parameter_count();
            result = train::fit(net, split.train, split.test, options);
            if (!fs::exists(checkpoint))
                bp::save_checkpoint(checkpoint, net, *config.seed, 0);
        } else {
            auto net = core::ALNetwork::build(plan, rng, adam);
            summary["parameters"] = net.total_parameter_count();
            summary["effective_parameters"] = net.effective_parameter_count();
            result = train::fit(net, split.train, split.test, options);
            if (!fs::exists(checkpoint))
                core::save_checkpoint(checkpoint, net, *config.seed, 0);
        }
    } catch (const nn::NumericError& e) {
        err << "numeric error: " << e.what() << "\n";
        return kNumericError;
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    metrics::write_csv(dir / "metrics.csv", result.history);
    summary["epochs_run"] = result.history.size() - 1;
    summary["final"] = metrics::to_json(result.final);
    summary["best"] = metrics::to_json(result.best);
    summary["final_train_accuracy"] = result.final.train_accuracy;
    summary["final_test_accuracy"] = result.final.test_accuracy ? nlohmann::json(*result.final.test_accuracy)
                                                                : nlohmann::json();
    summary["wall_clock_s"] = elapsed;
    if (result.last_throughput) {
        const auto& t = *result.last_throughput;
        summary["throughput"] = {{"wall_clock_s", t.wall_clock_s},
                                 {"time_units", t.time_units},
                                 {"tasks", t.tasks},
                                 {"busy_fraction", t.busy_fraction},
                                 {"speedup", t.speedup}};
    }
    metrics::write_json(dir / "summary.json", summary);
    out << "wrote " << dir.string() << "/{config.json,metrics.csv,summary.json,checkpoint.bin}\n";
    return kOk;
}

int cmd_bench(std::size_t batches, std::size_t components, double cost_ms, std::size_t capacity,
              const std::string& json_path, std::ostream& out, std::ostream& err) {
    if (components == 0 || capacity == 0) {
        err << "config error: components and queue capacity must be at least 1\n";
        return kConfigError;
    }
    const auto r = train::bench_pipeline(batches, components, cost_ms, capacity);
    out << "batches " << batches << ", components " << components << ", task cost " << cost_ms << " ms\n";
    out << "sequential: " << r.sequential.report.time_units << " time units, "
        << fmt("%.3f", r.sequential.report.wall_clock_s) << " s\n";
    out << "pipelined:  " << r.pipelined.report.time_units << " time units, "
        << fmt("%.3f", r.pipelined.report.wall_clock_s) << " s\n";
    out << "speedup: " << fmt("%.2f", r.speedup) << "x (ideal " << fmt("%.2f",
        r.pipelined.report.time_units ? static_cast<double>(r.sequential.report.time_units) /
                                            static_cast<double>(r.pipelined.report.time_units)
                                      : 0.0)
        << "x)\n";
    if (!json_path.empty())
        metrics::write_json(json_path, {{"batches", batches},
                                        {"components", components},
                                        {"task_cost_ms", cost_ms},
                                        {"sequential_time_units", r.sequential.report.time_units},
                                        {"pipelined_time_units", r.pipelined.report.time_units},
                                        {"sequential_wall_clock_s", r.sequential.report.wall_clock_s},
                                        {"pipelined_wall_clock_s", r.pipelined.report.wall_clock_s},
                                        {"busy_fraction", r.pipelined.report.busy_fraction},
                                        {"speedup", r.speedup}});
    return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Associated Learning and backpropagation trainer", "alearn"};
    app.require_subcommand(1);

    TrainFlags tf;
    auto* train = app.add_subcommand("train", "Train a model and write run artifacts");
    train->add_option("--config", tf.config_file, "JSON config file; flags override its values");
    train->add_option("--dataset", tf.values.dataset, "mnist, mnist-subset, blobs or xor");
    train->add_option("--data-dir", tf.values.data_dir, "Directory with the MNIST IDX files (default $AL_DATA_DIR)");
    train->add_option("--plan", tf.values.plan, "Plan name (paper-mlp, desk-mlp, desk-mlp-3, tiny) or inline widths");
    train->add_option("--mode", tf.values.mode, "al-seq, al-pipe or bp");
    train->add_option("--epochs", tf.values.epochs);
    train->add_option("--batch-size", tf.values.batch_size);
    train->add_option("--lr", tf.values.lr, "Initial learning rate");
    train->add_option("--lr-drops", tf.lr_drops, "Comma-separated epochs after which the rate is reduced");
    train->add_option("--lr-factor", tf.values.lr_factor, "Multiplier applied at each drop");
    train->add_option("--seed", tf.values.seed, "Random seed (required)");
    train->add_option("--out", tf.values.out, "Run directory");
    train->add_option("--head-loss", tf.values.head_loss, "BP head: softmax-ce or sigmoid-mse");
    train->add_option("--queue-capacity", tf.values.queue_capacity, "Pipelined mode queue capacity");

    std::size_t batches = 64, components = 4, capacity = 2;
    double cost_ms = 5.0;
    std::string bench_json;
    auto* bench = app.add_subcommand("bench-pipeline", "Pipelined vs sequential run of synthetic equal-cost tasks");
    bench->add_option("--batches", batches);
    bench->add_option("--components", components);
    bench->add_option("--cost-ms", cost_ms, "Cost of each task in milliseconds");
    bench->add_option("--queue-capacity", capacity);
    bench->add_option("--json", bench_json, "Also write the report as JSON");

    GradcheckOptions go;
    auto* grad = app.add_subcommand("gradcheck", "Finite-difference audit of every gradient path");
    grad->add_option("--plan", go.plan, "Plan name or inline widths");
    grad->add_option("--seed", go.seed);
    grad->add_option("--input-dim", go.input_dim);
    grad->add_option("--classes", go.classes);
    grad->add_option("--batch", go.batch);
    grad->add_flag("--inject-fault", go.inject_fault, "Corrupt one analytic gradient entry in each suite");

    std::vector<std::string> argv_store{"alearn"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_store)
        argv.push_back(a.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    }

    try {
        if (train->parsed())
            return cmd_train(*train, tf, out, err);
        if (bench->parsed())
            return cmd_bench(batches, components, cost_ms, capacity, bench_json, out, err);
        if (grad->parsed()) {
            if (go.input_dim == 0 || go.classes < 2 || go.batch == 0) {
                err << "config error: need input-dim >= 1, classes >= 2, batch >= 1\n";
                return kConfigError;
            }
            GradcheckSummary summary;
            try {
                summary = run_gradcheck(go);
            } catch (const core::PlanError& e) {
                err << "config error: " << e.what() << "\n";
                return kConfigError;
            }
            print_gradcheck(summary, out);
            return summary.pass ? kOk : kGradcheckFailed;
        }
    } catch (const nn::NumericError& e) {
        err << "numeric error: " << e.what() << "\n";
        return kNumericError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return kOk;
}

}  // namespace al::cli
