#include "al/metrics/metrics.hpp"

namespace al::metrics {

double accuracy(std::span<const std::size_t> predicted, std::span<const std::size_t> labels) {
    if (predicted.size() != labels.size())
        throw linalg::ShapeError("accuracy: " + std::to_string(predicted.size()) + " predictions but " +
                                 std::to_string(labels.size()) + " labels");
    if (labels.empty())
        return 0.0;
    std::size_t correct = 0;
    for (std::size_t i = 0; i < labels.size(); ++i)
        correct += predicted[i] == labels[i] ? 1 : 0;
    return static_cast<double>(correct) / static_cast<double>(labels.size());
}

std::vector<double> associated_loss_profile(core::ALNetwork& net, const data::Dataset& ds, std::size_t chunk) {
    std::vector<double> totals(net.component_count(), 0.0);
    std::vector<std::size_t> rows;
    for (std::size_t start = 0; start < ds.size(); start += chunk) {
        const std::size_t end = std::min(start + chunk, ds.size());
        rows.clear();
        for (std::size_t r = start; r < end; ++r)
            rows.push_back(r);
        const auto batch = data::make_batch(ds, rows);
        const auto losses = net.evaluate_losses(batch.x, batch.t);
        for (std::size_t c = 0; c < losses.size(); ++c)
            totals[c] += losses[c].mse1 * static_cast<double>(rows.size());
    }
    for (double& t : totals)
        t /= static_cast<double>(std::max<std::size_t>(ds.size(), 1));
    return totals;
}

}  // namespace al::metrics
