#include <cmath>
#include <sstream>

#include "al/metrics/metrics.hpp"
#include "al/metrics/report.hpp"
#include "support.hpp"

using namespace al::metrics;
using al::linalg::Matrix;
using al::linalg::Rng;

TEST(Accuracy, Examples) {
    const std::vector<std::size_t> pred{1, 2, 3, 4}, labels{1, 2, 0, 4};
    EXPECT_DOUBLE_EQ(accuracy(pred, labels), 0.75);
    EXPECT_DOUBLE_EQ(accuracy(labels, labels), 1.0);
    const std::vector<std::size_t> short_labels{1};
    EXPECT_THROW(accuracy(pred, short_labels), al::linalg::ShapeError);
}

TEST(Geometry, TwoClassExample) {
    // Class 0 at (0,0),(0,2); class 1 at (10,0),(10,2): intra 2, inter 10.
    const auto x = Matrix::from_rows({{0, 0}, {0, 2}, {10, 0}, {10, 2}});
    const std::vector<std::size_t> y{0, 0, 1, 1};
    for (const auto& g : {class_geometry(x, y), class_geometry_reference(x, y)}) {
        EXPECT_DOUBLE_EQ(g.intra_class_distance, 2.0);
        EXPECT_DOUBLE_EQ(g.inter_class_distance, 10.0);
        EXPECT_DOUBLE_EQ(g.ratio, 5.0);
    }
}

TEST(Geometry, SingletonClassesLeaveTheIntraMean) {
    // Class 2 has one point: it moves the centroids but not the intra mean.
    const auto x = Matrix::from_rows({{0, 0}, {0, 2}, {10, 0}, {10, 2}, {5, 20}});
    const std::vector<std::size_t> y{0, 0, 1, 1, 2};
    const auto g = class_geometry(x, y);
    EXPECT_DOUBLE_EQ(g.intra_class_distance, 2.0);
    // Centroids (0,1), (10,1), (5,20).
    const double inter = (10.0 + 2.0 * std::hypot(5.0, 19.0)) / 3.0;
    EXPECT_NEAR(g.inter_class_distance, inter, 1e-12);
}

TEST(Geometry, DegenerateInputsRejected) {
    const std::vector<std::size_t> one_class{0, 0, 0};
    EXPECT_THROW(class_geometry(Matrix::from_rows({{0}, {1}, {2}}), one_class), GeometryError);
    const std::vector<std::size_t> singletons{0, 1};
    try {
        class_geometry(Matrix::from_rows({{0}, {3}}), singletons);
        FAIL() << "expected GeometryError";
    } catch (const GeometryError& e) {
        EXPECT_NE(std::string(e.what()).find("interclass distance 3"), std::string::npos) << e.what();
    }
    const std::vector<std::size_t> stacked{0, 0, 1, 1};
    EXPECT_THROW(class_geometry(Matrix::from_rows({{0}, {0}, {1}, {1}}), stacked), GeometryError);
    EXPECT_THROW(class_geometry(Matrix(3, 2), stacked), GeometryError);
}

TEST(Geometry, InvariantUnderRigidMotions) {
    Rng rng(1);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 10 + rng.index(30), k = 2 + rng.index(4);
        auto x = al::linalg::normal_matrix(n, 2, rng, 3.0);
        std::vector<std::size_t> y(n);
        for (std::size_t i = 0; i < n; ++i)
            y[i] = i % k;
        const auto base = class_geometry(x, y);
        const double angle = rng.uniform() * 6.283185307179586, dx = rng.normal() * 50, dy = rng.normal() * 50;
        Matrix moved(n, 2);
        for (std::size_t i = 0; i < n; ++i) {
            moved(i, 0) = std::cos(angle) * x(i, 0) - std::sin(angle) * x(i, 1) + dx;
            moved(i, 1) = std::sin(angle) * x(i, 0) + std::cos(angle) * x(i, 1) + dy;
        }
        const auto g = class_geometry(moved, y);
        EXPECT_NEAR(g.intra_class_distance, base.intra_class_distance, 1e-9);
        EXPECT_NEAR(g.inter_class_distance, base.inter_class_distance, 1e-9);
        EXPECT_NEAR(g.ratio, base.ratio, 1e-9);
    }
}

TEST(Geometry, ParallelMatchesReference) {
    Rng rng(2);
    const auto x = al::linalg::normal_matrix(600, 16, rng);
    std::vector<std::size_t> y(600);
    for (auto& v : y)
        v = rng.index(10);
    const auto a = class_geometry(x, y), b = class_geometry_reference(x, y);
    EXPECT_NEAR(a.intra_class_distance, b.intra_class_distance, 1e-9);
    EXPECT_NEAR(a.inter_class_distance, b.inter_class_distance, 1e-9);
}

TEST(Report, CsvRowsForAlAndBp) {
    MetricsRecord al;
    al.epoch = 3;
    al.mode = "al-seq";
    al.lr = 1e-4;
    al.train_loss = 0.5;
    al.train_accuracy = 0.75;
    al.test_accuracy = 0.5;
    al.components = {{1, 0.25, 0.125}, {2, 0.1, 0.2}};
    EXPECT_EQ(to_csv_row(al), "3,al-seq,0.0001,0.5,0.75,0.5,0.25 0.1,0.125 0.2");

    MetricsRecord bp;
    bp.epoch = 0;
    bp.mode = "bp";
    bp.lr = 1e-3;
    bp.train_accuracy = 0.1;
    EXPECT_EQ(to_csv_row(bp), "0,bp,0.001,,0.1,,,");

    std::ostringstream os;
    write_csv(os, {al, bp});
    std::string header;
    std::istringstream in(os.str());
    std::getline(in, header);
    EXPECT_EQ(header, kCsvHeader);
}

TEST(Report, JsonRecord) {
    MetricsRecord r;
    r.epoch = 2;
    r.mode = "bp";
    r.train_accuracy = 0.9;
    const auto j = to_json(r);
    EXPECT_EQ(j["epoch"], 2);
    EXPECT_TRUE(j["test_accuracy"].is_null());
    EXPECT_TRUE(j["components"].empty());
}
