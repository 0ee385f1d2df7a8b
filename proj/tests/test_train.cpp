#include <atomic>
#include <filesystem>
#include <set>

#include "al/core/network.hpp"
#include "al/data/dataset.hpp"
#include "al/train/fit.hpp"
#include "al/train/queue.hpp"
#include "al/train/schedule.hpp"
#include "al/train/trainer.hpp"
#include "support.hpp"

using namespace al::train;
using al::core::ALNetwork;
using al::core::make_plan;
using al::linalg::Matrix;
using al::linalg::Rng;

namespace {

std::vector<Matrix> all_parameters(const ALNetwork& net) {
    std::vector<Matrix> out;
    for (const auto& c : net.components())
        for (const auto* block : {&c.f(), &c.g(), &c.b(), &c.h()})
            for (const auto* p : block->parameters())
                out.push_back(*p);
    return out;
}

std::vector<Stage> noop_stages(std::size_t count) { return std::vector<Stage>(count, [](BatchMessage&) {}); }

const Source empty_source = [](std::size_t) { return BatchMessage{}; };

al::data::Dataset blob_data(std::uint64_t seed) {
    Rng rng(seed);
    return al::data::synth_blobs(200, 5, 4, 3.0, rng);
}

}  // namespace

TEST(Schedule, FiveBatchesThreeComponents) {
    const auto trace = pipeline_schedule(5, 3);
    EXPECT_EQ(makespan(trace), 7u);
    EXPECT_EQ(trace.back(), (TaskSlot{7, 3, 5}));
    EXPECT_EQ(makespan(sequential_schedule(5, 3)), 15u);
    EXPECT_EQ(pipelined_time_units(5, 3), 7u);
    EXPECT_EQ(sequential_time_units(5, 3), 15u);
    // The third time unit is the first with every component busy.
    std::size_t busy_at_3 = 0;
    for (const auto& slot : trace)
        busy_at_3 += slot.time_unit == 3;
    EXPECT_EQ(busy_at_3, 3u);
    EXPECT_EQ(pipelined_time_units(0, 3), 0u);
}

TEST(Schedule, PropertiesOverRandomSizes) {
    Rng rng(1);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + rng.index(40), c = 1 + rng.index(8);
        const auto trace = pipeline_schedule(n, c);
        EXPECT_EQ(trace.size(), n * c);
        EXPECT_EQ(makespan(trace), n + c - 1);
        EXPECT_EQ(makespan(sequential_schedule(n, c)), n * c);
        std::set<std::pair<std::size_t, std::size_t>> batch_at_time;
        for (const auto& s : trace) {
            EXPECT_EQ(s.batch, s.time_unit - s.component + 1);
            EXPECT_TRUE(batch_at_time.insert({s.time_unit, s.batch}).second) << "batch twice in one time unit";
        }
    }
}

TEST(Queue, FifoAndClose) {
    BoundedQueue<int> q(2);
    EXPECT_TRUE(q.push(1));
    EXPECT_TRUE(q.push(2));
    q.close();
    EXPECT_FALSE(q.push(3));
    EXPECT_EQ(q.pop(), 1);
    EXPECT_EQ(q.pop(), 2);
    EXPECT_EQ(q.pop(), std::nullopt);
}

TEST(Pipeline, LogicalTraceMatchesStaggeredSchedule) {
    for (const std::size_t capacity : {1u, 2u, 8u}) {
        auto stages = noop_stages(3);
        PipelineOptions o;
        o.queue_capacity = capacity;
        const auto run = run_pipelined(5, empty_source, stages, o);
        EXPECT_EQ(run.trace, pipeline_schedule(5, 3));
        EXPECT_EQ(run.report.time_units, 7u);
        EXPECT_EQ(run.report.tasks, 15u);
    }
}

TEST(Pipeline, BarrierAndSequentialFollowTheSequentialSchedule) {
    auto stages = noop_stages(4);
    PipelineOptions o;
    o.barrier = true;
    EXPECT_EQ(run_pipelined(6, empty_source, stages, o).trace, sequential_schedule(6, 4));
    EXPECT_EQ(run_sequential(6, empty_source, stages).trace, sequential_schedule(6, 4));
}

TEST(Pipeline, BatchIdsArriveInOrder) {
    std::vector<std::vector<std::size_t>> seen(4);
    std::vector<Stage> stages;
    for (std::size_t c = 0; c < 4; ++c)
        stages.emplace_back([&seen, c](BatchMessage& m) { seen[c].push_back(m.batch_id); });
    run_pipelined(50, empty_source, stages);
    for (const auto& ids : seen) {
        ASSERT_EQ(ids.size(), 50u);
        for (std::size_t i = 0; i < ids.size(); ++i)
            EXPECT_EQ(ids[i], i + 1);
    }
}

TEST(Pipeline, WorkerFailurePropagates) {
    std::atomic<std::size_t> downstream{0};
    std::vector<Stage> stages{[](BatchMessage&) {},
                              [](BatchMessage& m) {
                                  if (m.batch_id == 3)
                                      throw std::runtime_error("stage 2 failed on batch 3");
                              },
                              [&](BatchMessage&) { ++downstream; }};
    EXPECT_THROW(run_pipelined(20, empty_source, stages), std::runtime_error);
    EXPECT_LE(downstream.load(), 2u);
    EXPECT_THROW(run_sequential(20, empty_source, stages), std::runtime_error);
}

TEST(Pipeline, SourceFailurePropagates) {
    auto stages = noop_stages(2);
    const Source failing = [](std::size_t m) -> BatchMessage {
        if (m == 4)
            throw std::runtime_error("no batch 4");
        return {};
    };
    EXPECT_THROW(run_pipelined(10, failing, stages), std::runtime_error);
}

TEST(Pipeline, ReportStaysWithinBounds) {
    std::vector<Stage> stages(3, [](BatchMessage&) { std::this_thread::sleep_for(std::chrono::milliseconds(1)); });
    const auto run = run_pipelined(12, empty_source, stages);
    EXPECT_EQ(run.report.time_units, 14u);
    ASSERT_EQ(run.report.busy_fraction.size(), 3u);
    for (double b : run.report.busy_fraction) {
        EXPECT_GT(b, 0.0);
        EXPECT_LE(b, 1.0);
    }
    EXPECT_LE(run.report.speedup, 3.0);
}

TEST(Pipeline, SingleComponentBenchHasNoSpeedup) {
    const auto r = bench_pipeline(20, 1, 2.0);
    EXPECT_EQ(r.sequential.report.time_units, 20u);
    EXPECT_EQ(r.pipelined.report.time_units, 20u);
    EXPECT_NEAR(r.speedup, 1.0, 0.2);
}

TEST(Trainer, BarrierAndPipelinedMatchSequentialBitForBit) {
    const auto data = blob_data(2);
    const auto plan = make_plan("8,6,5@7", 5, 4);
    Rng r1(3), r2(3), r3(3);
    auto seq = ALNetwork::build(plan, r1, {.lr = 1e-3});
    auto bar = ALNetwork::build(plan, r2, {.lr = 1e-3});
    auto pipe = ALNetwork::build(plan, r3, {.lr = 1e-3});
    TrainOptions o;
    o.batch_size = 16;
    o.seed = 4;
    TrainOptions ob = o;
    ob.barrier = true;
    for (std::size_t epoch = 1; epoch <= 2; ++epoch) {
        const auto a = train_epoch_sequential(seq, data, epoch, o);
        const auto b = train_epoch_pipelined(bar, data, epoch, ob);
        const auto c = train_epoch_pipelined(pipe, data, epoch, o);
        EXPECT_EQ(a.metrics.train_loss, b.metrics.train_loss);
        EXPECT_EQ(a.metrics.train_loss, c.metrics.train_loss);
        EXPECT_EQ(b.run.trace, sequential_schedule(13, 3));
        EXPECT_EQ(c.run.trace, pipeline_schedule(13, 3));
        EXPECT_EQ(c.run.report.time_units, 13u + 3u - 1u);
    }
    EXPECT_EQ(all_parameters(seq), all_parameters(bar));
    EXPECT_EQ(all_parameters(seq), all_parameters(pipe));
}

TEST(Trainer, ZeroLearningRateLeavesEveryParameter) {
    const auto data = blob_data(5);
    Rng rng(6);
    auto net = ALNetwork::build(make_plan("8,6", 5, 4), rng, {.lr = 0.0});
    const auto before = all_parameters(net);
    TrainOptions o;
    o.batch_size = 32;
    train_epoch_sequential(net, data, 1, o);
    train_epoch_pipelined(net, data, 2, o);
    EXPECT_EQ(all_parameters(net), before);
}

TEST(Trainer, ReportsPerComponentLosses) {
    const auto data = blob_data(7);
    Rng rng(8);
    auto net = ALNetwork::build(make_plan("8,6,5", 5, 4), rng, {.lr = 1e-3});
    TrainOptions o;
    o.batch_size = 32;
    const auto out = train_epoch_sequential(net, data, 1, o);
    ASSERT_EQ(out.metrics.components.size(), 3u);
    double total = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_EQ(out.metrics.components[i].component, i + 1);
        EXPECT_TRUE(std::isfinite(out.metrics.components[i].mse1));
        EXPECT_TRUE(std::isfinite(out.metrics.components[i].mse2));
        total += out.metrics.components[i].local_objective();
    }
    EXPECT_NEAR(*out.metrics.train_loss, total, 1e-12);
    EXPECT_EQ(out.metrics.mode, "al-seq");
}

TEST(Trainer, XorWithOneComponent) {
    const auto data = al::data::synth_xor();
    Rng rng(9);
    auto net = ALNetwork::build(make_plan("tiny", 2, 2), rng, {.lr = 1e-2});
    TrainOptions o;
    o.batch_size = 4;
    o.evaluate_train_accuracy = false;
    std::size_t epoch = 1;
    for (; epoch <= 2000; ++epoch) {
        train_epoch_sequential(net, data, epoch, o);
        if (al::metrics::evaluate_accuracy(net, data) == 1.0)
            break;
    }
    EXPECT_LE(epoch, 2000u);
}

TEST(Trainer, MnistSubsetSmokeLossesFiniteAndDecreasing) {
    const auto dir = al::test::mnist_dir();
    if (dir.empty() || !al::data::has_mnist(dir))
        GTEST_SKIP() << "MNIST not available (set AL_DATA_DIR)";
    const auto split = al::data::load_mnist_subset(dir);
    // mse2 of every component should fall epoch over epoch; majority over 3 seeds.
    int good_seeds = 0;
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        Rng rng(seed);
        auto net = ALNetwork::build(make_plan("desk-mlp", 784, 10), rng, {.lr = 1e-4});
        TrainOptions o;
        o.seed = seed;
        o.evaluate_train_accuracy = false;
        std::vector<double> last(net.component_count(), INFINITY);
        bool decreasing = true;
        for (std::size_t epoch = 1; epoch <= 3; ++epoch) {
            const auto m = train_epoch_sequential(net, split.train, epoch, o).metrics;
            for (std::size_t i = 0; i < m.components.size(); ++i) {
                ASSERT_TRUE(std::isfinite(m.components[i].mse1));
                ASSERT_TRUE(std::isfinite(m.components[i].mse2));
                decreasing = decreasing && m.components[i].mse2 < last[i];
                last[i] = m.components[i].mse2;
            }
        }
        good_seeds += decreasing;
    }
    EXPECT_GE(good_seeds, 2);
}

TEST(LrSchedule, StepsAfterListedEpochs) {
    const LrSchedule s;
    EXPECT_DOUBLE_EQ(s.lr_for_epoch(1), 1e-4);
    EXPECT_DOUBLE_EQ(s.lr_for_epoch(80), 1e-4);
    EXPECT_DOUBLE_EQ(s.lr_for_epoch(81), 5e-5);
    EXPECT_LT(s.lr_for_epoch(81), s.lr_for_epoch(80));
    EXPECT_DOUBLE_EQ(s.lr_for_epoch(121), 2.5e-5);
    EXPECT_DOUBLE_EQ(s.lr_for_epoch(200), 1e-4 / 16);
}

TEST(Fit, ZeroEpochsReturnsInitialMetricsWithoutCheckpoint) {
    const auto data = blob_data(10);
    Rng rng(11);
    auto net = ALNetwork::build(make_plan("8", 5, 4), rng);
    const auto dir = al::test::tmp_dir("fit0");
    FitOptions o;
    o.epochs = 0;
    o.checkpoint = dir / "ckpt.bin";
    const auto r = fit(net, data, data, o);
    ASSERT_EQ(r.history.size(), 1u);
    EXPECT_EQ(r.final.epoch, 0u);
    EXPECT_TRUE(r.final.test_accuracy.has_value());
    EXPECT_FALSE(std::filesystem::exists(dir / "ckpt.bin"));
}

TEST(Fit, DeterministicAndAppliesSchedule) {
    const auto train = blob_data(12), test = blob_data(13);
    std::vector<double> finals;
    for (int run = 0; run < 2; ++run) {
        Rng rng(14);
        auto net = ALNetwork::build(make_plan("8,6", 5, 4), rng);
        FitOptions o;
        o.epochs = 4;
        o.batch_size = 32;
        o.seed = 14;
        o.schedule.initial = 1e-2;
        o.schedule.drops = {2};
        o.checkpoint = al::test::tmp_dir("fit_det" + std::to_string(run)) / "best.bin";
        const auto r = fit(net, train, test, o);
        ASSERT_EQ(r.history.size(), 5u);
        EXPECT_DOUBLE_EQ(r.history[2].lr, 1e-2);
        EXPECT_DOUBLE_EQ(r.history[3].lr, 5e-3);
        EXPECT_TRUE(std::filesystem::exists(*o.checkpoint));
        finals.push_back(*r.final.test_accuracy);
    }
    EXPECT_EQ(finals[0], finals[1]);
}

TEST(Fit, PipelinedModeReportsThroughput) {
    const auto data = blob_data(15);
    Rng rng(16);
    auto net = ALNetwork::build(make_plan("8,6", 5, 4), rng);
    FitOptions o;
    o.epochs = 1;
    o.batch_size = 50;
    o.mode = Mode::AlPipelined;
    const auto r = fit(net, data, {}, o);
    ASSERT_TRUE(r.last_throughput.has_value());
    EXPECT_EQ(r.last_throughput->time_units, 4u + 2u - 1u);
    EXPECT_EQ(r.final.mode, "al-pipe");
    EXPECT_FALSE(r.final.test_accuracy.has_value());
    EXPECT_THROW(fit(net, data, {}, FitOptions{.mode = Mode::Bp}), std::invalid_argument);
}
