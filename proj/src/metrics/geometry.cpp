#include <cmath>

#include "al/linalg/kernels.hpp"
#include "al/metrics/metrics.hpp"

namespace al::metrics {

namespace {

using PairSum = linalg::Real (*)(std::size_t, std::size_t, std::span<const linalg::Real>);

ClassGeometry geometry_with(const Matrix& features, std::span<const std::size_t> labels, PairSum pair_sum) {
    if (features.rows() != labels.size())
        throw GeometryError("class_geometry: " + std::to_string(features.rows()) + " points but " +
                            std::to_string(labels.size()) + " labels");
    std::size_t n_classes = 0;
    for (std::size_t y : labels)
        n_classes = std::max(n_classes, y + 1);

    std::vector<std::vector<std::size_t>> members(n_classes);
    for (std::size_t i = 0; i < labels.size(); ++i)
        members[labels[i]].push_back(i);

    const std::size_t d = features.cols();
    std::vector<linalg::Real> centroids;
    double intra_total = 0.0;
    std::size_t intra_classes = 0;
    std::size_t present = 0;
    for (const auto& rows : members) {
        if (rows.empty())
            continue;
        ++present;
        const Matrix pts = linalg::gather_rows(features, rows);
        const Matrix centroid = linalg::scale(linalg::col_sum(pts), 1.0 / static_cast<double>(rows.size()));
        centroids.insert(centroids.end(), centroid.data().begin(), centroid.data().end());
        if (rows.size() >= 2) {
            const double pairs = static_cast<double>(rows.size()) * static_cast<double>(rows.size() - 1) / 2.0;
            intra_total += pair_sum(rows.size(), d, pts.data()) / pairs;
            ++intra_classes;
        }
    }
    if (present < 2)
        throw GeometryError("class_geometry needs at least two classes with points");

    ClassGeometry g;
    const double centroid_pairs = static_cast<double>(present) * static_cast<double>(present - 1) / 2.0;
    g.inter_class_distance = pair_sum(present, d, centroids) / centroid_pairs;
    if (intra_classes == 0)
        throw GeometryError("class_geometry: every class has a single point (interclass distance " +
                            std::to_string(g.inter_class_distance) + "), intraclass distance undefined");
    g.intra_class_distance = intra_total / static_cast<double>(intra_classes);
    if (g.intra_class_distance == 0.0)
        throw GeometryError("class_geometry: intraclass distance is zero, ratio undefined");
    g.ratio = g.inter_class_distance / g.intra_class_distance;
    return g;
}

}  // namespace

ClassGeometry class_geometry(const Matrix& features, std::span<const std::size_t> labels) {
    return geometry_with(features, labels, &linalg::kernels::omp::pairwise_distance_sum);
}

ClassGeometry class_geometry_reference(const Matrix& features, std::span<const std::size_t> labels) {
    return geometry_with(features, labels, &linalg::kernels::serial::pairwise_distance_sum);
}

}  // namespace al::metrics
