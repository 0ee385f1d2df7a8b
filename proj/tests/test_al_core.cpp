#include <cmath>
#include <fstream>

#include "al/core/al_grad_check.hpp"
#include "al/core/checkpoint.hpp"
#include "al/core/network.hpp"
#include "al/data/dataset.hpp"
#include "al/nn/errors.hpp"
#include "support.hpp"

using namespace al::core;
using al::linalg::Matrix;
using al::linalg::Rng;
using al::nn::Activation;
using al::nn::DenseLayer;
using al::nn::MLPBlock;
using al::test::near;

namespace {

// Plain-loop reference for one dense layer, written independently of the library kernels.
Matrix naive_dense(const Matrix& x, const DenseLayer& layer) {
    const auto& w = layer.weights();
    Matrix out(x.rows(), w.cols());
    for (std::size_t r = 0; r < x.rows(); ++r) {
        double denom = 0.0;
        for (std::size_t j = 0; j < w.cols(); ++j) {
            double z = layer.bias()(0, j);
            for (std::size_t i = 0; i < w.rows(); ++i)
                z += x(r, i) * w(i, j);
            switch (layer.activation()) {
            case Activation::Identity: out(r, j) = z; break;
            case Activation::Elu: out(r, j) = z > 0 ? z : std::exp(z) - 1.0; break;
            case Activation::Sigmoid: out(r, j) = 1.0 / (1.0 + std::exp(-z)); break;
            case Activation::Softmax: out(r, j) = std::exp(z); denom += out(r, j); break;
            }
        }
        if (layer.activation() == Activation::Softmax)
            for (std::size_t j = 0; j < w.cols(); ++j)
                out(r, j) /= denom;
    }
    return out;
}

Matrix naive_block(Matrix x, const MLPBlock& block) {
    for (const auto& layer : block.layers())
        x = naive_dense(x, layer);
    return x;
}

double naive_mse(const Matrix& a, const Matrix& b) {
    double total = 0.0;
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c)
            total += (a(r, c) - b(r, c)) * (a(r, c) - b(r, c));
    return total / static_cast<double>(a.rows());
}

MLPBlock single(Matrix w, Matrix b, Activation act) {
    std::vector<DenseLayer> layers;
    layers.emplace_back(std::move(w), std::move(b), act);
    return MLPBlock(std::move(layers));
}

MLPBlock identity_block(std::size_t n) { return single(Matrix::identity(n), Matrix::zeros(1, n), Activation::Identity); }

std::vector<std::vector<Matrix>> snapshot(const Component& c) {
    std::vector<std::vector<Matrix>> out;
    for (const auto* block : {&c.f(), &c.g(), &c.b(), &c.h()}) {
        std::vector<Matrix> params;
        for (const auto* p : block->parameters())
            params.push_back(*p);
        out.push_back(params);
    }
    return out;
}

struct Batch {
    Matrix x;
    Matrix t0;
};

Batch random_batch(std::size_t rows, std::size_t dim, std::size_t classes, Rng& rng) {
    std::vector<std::size_t> labels(rows);
    for (auto& l : labels)
        l = rng.index(classes);
    return {al::linalg::normal_matrix(rows, dim, rng), al::data::one_hot(labels, classes)};
}

}  // namespace

TEST(Component, IdentityMapsGiveZeroLosses) {
    Component c(1, identity_block(3), identity_block(3), identity_block(3), identity_block(3));
    const auto x = Matrix::from_rows({{0.1, 0.2, 0.3}, {1, 0, 0}});
    const auto out = c.forward(x, x, false);
    EXPECT_EQ(out.losses.mse1, 0.0);
    EXPECT_EQ(out.losses.mse2, 0.0);
    EXPECT_EQ(out.s, x);
    EXPECT_EQ(out.t, x);
}

TEST(Component, HandBuiltLossesMatchOracle) {
    auto f = single(Matrix::from_rows({{0.5, -1.0}, {2.0, 0.25}}), Matrix::from_rows({{0.1, -0.2}}), Activation::Elu);
    auto g = single(Matrix::from_rows({{1.0, -0.5}, {0.3, 0.8}}), Matrix::from_rows({{0.0, 0.1}}), Activation::Sigmoid);
    auto b = single(Matrix::from_rows({{-0.7, 0.2}, {0.4, 1.1}}), Matrix::from_rows({{0.05, 0.0}}), Activation::Sigmoid);
    auto h = single(Matrix::from_rows({{0.9, -0.3}, {-1.2, 0.6}}), Matrix::from_rows({{0.0, -0.1}}), Activation::Sigmoid);
    const auto s0 = Matrix::from_rows({{1.0, -2.0}, {0.5, 0.5}});
    const auto t0 = Matrix::from_rows({{1.0, 0.0}, {0.0, 1.0}});

    const Matrix s1 = naive_block(s0, f), t1 = naive_block(t0, g);
    const double mse1 = naive_mse(naive_block(s1, b), t1);
    const double mse2 = naive_mse(naive_block(t1, h), t0);

    Component c(1, f, g, b, h);
    const auto out = c.forward(s0, t0, false);
    EXPECT_NEAR(out.losses.mse1, mse1, 1e-9);
    EXPECT_NEAR(out.losses.mse2, mse2, 1e-9);
    EXPECT_TRUE(near(out.s, s1, 1e-12));
    EXPECT_TRUE(near(out.t, t1, 1e-12));
}

TEST(Component, RejectsBadInputs) {
    Rng rng(1);
    Component c(1, ComponentDims{4, 3, 2, 3, 3}, BlockDepths{}, rng);
    EXPECT_THROW(c.forward(Matrix(2, 5), Matrix(2, 2), false), al::linalg::ShapeError);
    EXPECT_THROW(c.forward(Matrix(2, 4), Matrix(3, 2), false), al::linalg::ShapeError);
    Matrix bad(2, 4);
    bad(0, 0) = std::nan("");
    try {
        c.forward(bad, Matrix(2, 2), false);
        FAIL() << "expected NumericError";
    } catch (const al::nn::NumericError& e) {
        EXPECT_EQ(e.component(), 1u);
    }
}

TEST(Component, FlowSeparationIsBitExact) {
    Rng rng(2);
    const auto plan = make_plan("6,5", 4, 3);
    for (const auto flow : {Flow::Associated, Flow::Autoencoder}) {
        auto net = ALNetwork::build(plan, rng, {.lr = 1e-2});
        const auto batch = random_batch(5, 4, 3, rng);
        auto& c = net.component(1);
        const auto before = snapshot(c);
        for (int step = 0; step < 3; ++step)
            c.update(batch.x, batch.t0, flow);
        const auto after = snapshot(c);
        // Order in snapshot: f, g, b, h.
        const bool associated = flow == Flow::Associated;
        EXPECT_EQ(after[0] == before[0], !associated);
        EXPECT_EQ(after[2] == before[2], !associated);
        EXPECT_EQ(after[1] == before[1], associated);
        EXPECT_EQ(after[3] == before[3], associated);
    }
}

TEST(Component, LossDecreasesOnAFixedBatch) {
    Rng rng(3);
    auto net = ALNetwork::build(make_plan("16", 8, 4), rng, {.lr = 1e-4});
    const auto batch = random_batch(16, 8, 4, rng);
    auto& c = net.component(1);
    const auto before = c.forward(batch.x, batch.t0, false).losses;
    for (int step = 0; step < 20; ++step)
        c.update(batch.x, batch.t0);
    const auto after = c.forward(batch.x, batch.t0, false).losses;
    EXPECT_LT(after.mse1, before.mse1);
    EXPECT_LT(after.mse2, before.mse2);
}

TEST(Component, ZeroLearningRateChangesNothing) {
    Rng rng(4);
    auto net = ALNetwork::build(make_plan("6,5", 4, 3), rng, {.lr = 0.0});
    const auto batch = random_batch(5, 4, 3, rng);
    const auto before = snapshot(net.component(1));
    net.component(1).update(batch.x, batch.t0);
    EXPECT_EQ(snapshot(net.component(1)), before);
}

TEST(ALGradients, EveryFlowMatchesFiniteDifferences) {
    Rng rng(5);
    for (const char* spec : {"5", "5,4", "5/4,4/6,3@7"}) {
        auto net = ALNetwork::build(make_plan(spec, 4, 3), rng);
        const auto batch = random_batch(3, 4, 3, rng);
        const auto report = check_al_gradients(net, batch.x, batch.t0);
        EXPECT_LT(report.max_rel_error, 1e-4) << spec;
        EXPECT_LT(report.max_zero_error, 1e-7) << spec;
        // Per component: 4 blocks x 2 flows, plus one row per other component.
        const std::size_t c = net.component_count();
        EXPECT_EQ(report.rows.size(), c * 8 + c * (c - 1)) << spec;
    }
}

TEST(ALGradients, PlantedFaultIsCaught) {
    Rng rng(6);
    auto net = ALNetwork::build(make_plan("5,4", 4, 3), rng);
    const auto batch = random_batch(3, 4, 3, rng);
    ALCheckOptions o;
    o.planted_fault = 1e-2;
    EXPECT_GT(check_al_gradients(net, batch.x, batch.t0, o).max_rel_error, 1e-2);
}

TEST(ALGradients, RandomPlansProperty) {
    Rng rng(7);
    for (int trial = 0; trial < 8; ++trial) {
        const std::size_t components = 1 + rng.index(3);
        std::string spec;
        for (std::size_t i = 0; i < components; ++i)
            spec += (i ? "," : "") + std::to_string(2 + rng.index(5)) + "/" + std::to_string(2 + rng.index(5));
        spec += "@" + std::to_string(2 + rng.index(6));
        const std::size_t in = 1 + rng.index(5), classes = 2 + rng.index(3);
        auto net = ALNetwork::build(make_plan(spec, in, classes), rng);
        const auto batch = random_batch(1 + rng.index(4), in, classes, rng);
        const auto report = check_al_gradients(net, batch.x, batch.t0);
        EXPECT_LT(report.max_rel_error, 1e-4) << spec;
        EXPECT_LT(report.max_zero_error, 1e-7) << spec;
    }
}

TEST(Network, InferenceIgnoresEncodersAndLowerBridges) {
    Rng rng(8);
    auto net = ALNetwork::build(make_plan("6,5,4@7", 4, 3), rng, {.lr = 1e-3});
    const auto batch = random_batch(10, 4, 3, rng);
    // A little training first so the check is not on freshly initialized weights.
    for (int step = 0; step < 5; ++step) {
        Matrix s = batch.x, t = batch.t0;
        for (auto& c : net.components()) {
            auto out = c.update(s, t);
            s = out.s;
            t = out.t;
        }
    }
    const auto before = net.infer(batch.x);
    const std::size_t top = net.component_count();
    for (std::size_t i = 1; i <= top; ++i) {
        auto& c = net.component(i);
        for (auto* p : c.g().parameters())
            for (auto& v : p->data())
                v += 1000.0;
        if (i < top)
            for (auto* p : c.b().parameters())
                for (auto& v : p->data())
                    v += 1000.0;
    }
    const auto after = net.infer(batch.x);
    EXPECT_EQ(after.scores, before.scores);
    EXPECT_EQ(after.classes, before.classes);
}

TEST(Network, InferMatchesHandComposition) {
    Rng rng(9);
    const auto net = ALNetwork::build(make_plan("5,4@6", 3, 2), rng);
    const auto x = al::linalg::normal_matrix(4, 3, rng);
    const auto& c1 = net.components()[0];
    const auto& c2 = net.components()[1];
    const Matrix expected =
        naive_block(naive_block(naive_block(naive_block(naive_block(x, c1.f()), c2.f()), c2.b()), c2.h()), c1.h());
    EXPECT_TRUE(near(net.infer(x).scores, expected, 1e-9));
    EXPECT_TRUE(near(net.metafeatures(x, 2), naive_block(naive_block(x, c1.f()), c2.f()), 1e-12));
}

TEST(Network, RejectsComponentsThatDoNotChain) {
    Rng rng(10);
    std::vector<Component> parts;
    parts.emplace_back(1, ComponentDims{4, 5, 3, 5, 5}, BlockDepths{}, rng);
    parts.emplace_back(2, ComponentDims{6, 5, 5, 5, 5}, BlockDepths{}, rng);
    EXPECT_THROW(ALNetwork{std::move(parts)}, PlanError);
}

TEST(Plan, PaperMlpWidths) {
    const auto plan = make_plan("paper-mlp", 784, 10);
    const auto dims = plan.components();
    ASSERT_EQ(dims.size(), 2u);
    EXPECT_EQ(dims[0], (ComponentDims{784, 1024, 10, 1024, 1024}));
    EXPECT_EQ(dims[1], (ComponentDims{1024, 1024, 1024, 1024, 5120}));
    EXPECT_EQ(b_widths(dims[1], plan.depths), (std::vector<std::size_t>{1024, 5120, 1024}));
    EXPECT_EQ(h_widths(dims[0], plan.depths), (std::vector<std::size_t>{1024, 10}));
    // f1 + f2 + b2 (two layers) + h2 + h1.
    const std::size_t expected = (784 * 1024 + 1024) + (1024 * 1024 + 1024) + (1024 * 5120 + 5120) +
                                 (5120 * 1024 + 1024) + (1024 * 1024 + 1024) + (1024 * 10 + 10);
    EXPECT_EQ(effective_parameter_count(plan), expected);
}

TEST(Plan, SingleComponentIsValid) {
    Rng rng(11);
    auto net = ALNetwork::build(make_plan("16", 2, 2), rng);
    EXPECT_EQ(net.component_count(), 1u);
    EXPECT_EQ(net.infer(Matrix(3, 2)).scores.cols(), 2u);
}

TEST(Plan, Errors) {
    EXPECT_THROW(make_plan("", 4, 2), PlanError);
    EXPECT_THROW(make_plan("0,4", 4, 2), PlanError);
    EXPECT_THROW(make_plan("4,x", 4, 2), PlanError);
    EXPECT_THROW(make_plan("desk-mlp", 0, 2), PlanError);
}

TEST(Plan, JsonRoundTrip) {
    const auto plan = make_plan("7/3,5/4@9", 6, 3);
    EXPECT_EQ(plan_from_json(to_json(plan)), plan);
}

TEST(Network, SameSeedSameNetworkAndTrajectory) {
    const auto plan = make_plan("6,5", 4, 3);
    Rng r1(12), r2(12);
    auto a = ALNetwork::build(plan, r1), b = ALNetwork::build(plan, r2);
    Rng data_rng(13);
    const auto batch = random_batch(5, 4, 3, data_rng);
    for (auto* net : {&a, &b}) {
        Matrix s = batch.x, t = batch.t0;
        for (auto& c : net->components()) {
            auto out = c.update(s, t);
            s = out.s;
            t = out.t;
        }
    }
    for (std::size_t i = 1; i <= 2; ++i)
        EXPECT_EQ(snapshot(a.component(i)), snapshot(b.component(i)));
}

TEST(Checkpoint, RoundTrip) {
    Rng rng(14);
    auto net = ALNetwork::build(make_plan("6,5@8", 4, 3), rng);
    const auto path = al::test::tmp_dir("ckpt") / "net.bin";
    save_checkpoint(path, net, 14, 3);
    nlohmann::json header;
    const auto loaded = load_al_checkpoint(path, &header);
    EXPECT_EQ(header["tag"], "al");
    EXPECT_EQ(header["epoch"], 3);
    EXPECT_EQ(header["seed"], 14);
    EXPECT_EQ(loaded.plan(), net.plan());
    for (std::size_t i = 1; i <= 2; ++i)
        EXPECT_EQ(snapshot(const_cast<ALNetwork&>(loaded).component(i)), snapshot(net.component(i)));
    const auto x = al::linalg::normal_matrix(3, 4, rng);
    EXPECT_EQ(loaded.infer(x).scores, net.infer(x).scores);
}

TEST(Checkpoint, CorruptFilesRejected) {
    Rng rng(15);
    auto net = ALNetwork::build(make_plan("4", 3, 2), rng);
    const auto dir = al::test::tmp_dir("ckpt_bad");
    save_checkpoint(dir / "good.bin", net, 1, 0);

    std::ifstream in(dir / "good.bin", std::ios::binary);
    std::string bytes((std::istreambuf_iterator<char>(in)), {});
    {
        std::ofstream out(dir / "magic.bin", std::ios::binary);
        std::string bad = bytes;
        bad[0] = 'X';
        out << bad;
    }
    {
        std::ofstream out(dir / "short.bin", std::ios::binary);
        out << bytes.substr(0, bytes.size() - 8);
    }
    EXPECT_THROW(load_al_checkpoint(dir / "magic.bin"), CheckpointError);
    EXPECT_THROW(load_al_checkpoint(dir / "short.bin"), CheckpointError);
    EXPECT_THROW(load_al_checkpoint(dir / "missing.bin"), CheckpointError);
}
