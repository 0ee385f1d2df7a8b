#include <algorithm>
#include <cmath>
#include <numeric>

#include "al/data/dataset.hpp"

namespace al::data {

void Dataset::validate() const {
    if (x.rows() != y.size())
        throw DataError("dataset has " + std::to_string(x.rows()) + " feature rows but " +
                        std::to_string(y.size()) + " labels");
    for (std::size_t i = 0; i < y.size(); ++i)
        if (y[i] >= n_classes)
            throw DataError("label " + std::to_string(y[i]) + " at row " + std::to_string(i) + " out of range");
    if (!linalg::all_finite(x))
        throw DataError("dataset features contain non-finite values");
}

Dataset take_rows(const Dataset& source, std::span<const std::size_t> rows) {
    Dataset out;
    out.n_classes = source.n_classes;
    out.x = linalg::gather_rows(source.x, rows);
    out.y.reserve(rows.size());
    for (std::size_t r : rows)
        out.y.push_back(source.y[r]);
    return out;
}

Dataset stratified_subset(const Dataset& source, std::size_t n, linalg::Rng& rng) {
    if (n > source.size())
        throw DataError("cannot sample " + std::to_string(n) + " rows from a dataset of " +
                        std::to_string(source.size()));
    std::vector<std::vector<std::size_t>> by_class(source.n_classes);
    for (std::size_t i = 0; i < source.size(); ++i)
        by_class[source.y[i]].push_back(i);

    // Largest-remainder quotas.
    const double total = static_cast<double>(source.size());
    std::vector<std::size_t> quota(source.n_classes);
    std::vector<std::pair<double, std::size_t>> remainders;
    std::size_t assigned = 0;
    for (std::size_t k = 0; k < source.n_classes; ++k) {
        const double exact = static_cast<double>(n) * static_cast<double>(by_class[k].size()) / total;
        quota[k] = static_cast<std::size_t>(std::floor(exact));
        assigned += quota[k];
        remainders.emplace_back(exact - std::floor(exact), k);
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t i = 0; assigned < n; ++i, ++assigned)
        quota[remainders[i % remainders.size()].second] += 1;

    std::vector<std::size_t> rows;
    rows.reserve(n);
    for (std::size_t k = 0; k < source.n_classes; ++k) {
        auto& members = by_class[k];
        rng.shuffle(members);
        rows.insert(rows.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(quota[k]));
    }
    std::sort(rows.begin(), rows.end());
    return take_rows(source, rows);
}

Matrix one_hot(std::span<const std::size_t> labels, std::size_t n_classes) {
    Matrix out(labels.size(), n_classes);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] >= n_classes)
            throw DataError("one_hot: label " + std::to_string(labels[i]) + " out of range for " +
                            std::to_string(n_classes) + " classes");
        out(i, labels[i]) = 1.0;
    }
    return out;
}

BatchIterator::BatchIterator(std::size_t n, std::size_t batch_size, std::uint64_t seed, bool shuffle)
    : batch_size_(batch_size), seed_(seed), shuffle_(shuffle), order_(n) {
    if (batch_size == 0)
        throw DataError("batch size must be positive");
    std::iota(order_.begin(), order_.end(), std::size_t{0});
}

void BatchIterator::start_epoch(std::size_t epoch) {
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    if (shuffle_) {
        linalg::Rng rng = linalg::Rng(seed_).derive(epoch);
        rng.shuffle(order_);
    }
    cursor_ = 0;
}

std::span<const std::size_t> BatchIterator::next() {
    if (cursor_ >= order_.size())
        return {};
    const std::size_t len = std::min(batch_size_, order_.size() - cursor_);
    std::span<const std::size_t> out(order_.data() + cursor_, len);
    cursor_ += len;
    return out;
}

std::size_t BatchIterator::batch_count() const noexcept {
    return (order_.size() + batch_size_ - 1) / batch_size_;
}

Batch make_batch(const Dataset& data, std::span<const std::size_t> indices) {
    Batch b;
    b.x = linalg::gather_rows(data.x, indices);
    b.labels.reserve(indices.size());
    for (std::size_t i : indices)
        b.labels.push_back(data.y[i]);
    b.t = one_hot(b.labels, data.n_classes);
    return b;
}

}  // namespace al::data
