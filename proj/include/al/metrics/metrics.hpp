#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "al/core/network.hpp"
#include "al/data/dataset.hpp"

namespace al::metrics {

using linalg::Matrix;

struct MetricsRecord {
    std::size_t epoch = 0;
    std::string mode;                          // "al-seq", "al-pipe" or "bp"
    double lr = 0.0;
    std::vector<core::LossRecord> components;  // AL only
    std::optional<double> train_loss;          // mean training objective over the epoch
    double train_accuracy = 0.0;
    std::optional<double> test_accuracy;
    double wall_clock_s = 0.0;
};

double accuracy(std::span<const std::size_t> predicted, std::span<const std::size_t> labels);

// Predicts in chunks so large datasets do not need one giant activation matrix.
template <typename Model>
double evaluate_accuracy(const Model& model, const data::Dataset& ds, std::size_t chunk = 2048) {
    if (ds.size() == 0)
        return 0.0;
    std::size_t correct = 0;
    std::vector<std::size_t> rows;
    for (std::size_t start = 0; start < ds.size(); start += chunk) {
        const std::size_t end = std::min(start + chunk, ds.size());
        rows.clear();
        for (std::size_t r = start; r < end; ++r)
            rows.push_back(r);
        const auto pred = model.infer(linalg::gather_rows(ds.x, rows));
        for (std::size_t i = 0; i < rows.size(); ++i)
            correct += pred.classes[i] == ds.y[rows[i]] ? 1 : 0;
    }
    return static_cast<double>(correct) / static_cast<double>(ds.size());
}

// Evaluation-mode associated loss (mse1) of every component on `ds`,
// averaged over rows.
std::vector<double> associated_loss_profile(core::ALNetwork& net, const data::Dataset& ds,
                                            std::size_t chunk = 2048);

class GeometryError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct ClassGeometry {
    double inter_class_distance = 0.0;
    double intra_class_distance = 0.0;
    double ratio = 0.0;
};

// intra: mean over classes with at least two points of the mean pairwise
//        Euclidean distance inside the class.
// inter: mean pairwise Euclidean distance between class centroids.
ClassGeometry class_geometry(const Matrix& features, std::span<const std::size_t> labels);
// Same quantities computed with the serial reference kernel.
ClassGeometry class_geometry_reference(const Matrix& features, std::span<const std::size_t> labels);

}  // namespace al::metrics
