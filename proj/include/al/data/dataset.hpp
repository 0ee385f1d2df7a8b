#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "al/linalg/matrix.hpp"
#include "al/linalg/rng.hpp"

namespace al::data {

using linalg::Matrix;

class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// IDX failures, one type per failure class.
class IdxMagicError : public DataError {
public:
    using DataError::DataError;
};
class IdxTruncatedError : public DataError {
public:
    using DataError::DataError;
};
class IdxCountMismatchError : public DataError {
public:
    using DataError::DataError;
};

struct Dataset {
    Matrix x;                       // n × d
    std::vector<std::size_t> y;     // n labels in [0, n_classes)
    std::size_t n_classes = 0;

    std::size_t size() const noexcept { return y.size(); }
    std::size_t dim() const noexcept { return x.cols(); }
    void validate() const;
};

struct Split {
    Dataset train;
    Dataset test;
};

inline constexpr std::uint32_t kIdxImageMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelMagic = 0x00000801;

// Reads a file, inflating it when it is gzip-compressed.
std::vector<std::uint8_t> read_maybe_gzip(const std::filesystem::path& path);

// IDX image + label files. Pixels are flattened row-major and scaled by 1/255.
Dataset load_idx(const std::filesystem::path& images, const std::filesystem::path& labels,
                 std::size_t n_classes = 10);
Dataset parse_idx(std::span<const std::uint8_t> images, std::span<const std::uint8_t> labels,
                  std::size_t n_classes = 10);

// Finds "<dir>/<name>" or "<dir>/<name>.gz".
std::filesystem::path resolve_data_file(const std::filesystem::path& dir, const std::string& name);
bool has_mnist(const std::filesystem::path& dir);
Split load_mnist(const std::filesystem::path& dir);
// Seeded class-stratified sample of n_train training and n_test test rows.
Split load_mnist_subset(const std::filesystem::path& dir, std::size_t n_train = 6000,
                        std::size_t n_test = 1000, std::uint64_t seed = 2020);

// Class-stratified sample of n rows: per-class quotas by largest remainder,
// members drawn without replacement, result kept in original row order.
Dataset stratified_subset(const Dataset& source, std::size_t n, linalg::Rng& rng);
Dataset take_rows(const Dataset& source, std::span<const std::size_t> rows);

Matrix one_hot(std::span<const std::size_t> labels, std::size_t n_classes);

// k Gaussian blobs (unit variance) with centers evenly spaced on a circle of
// radius `separation` in the first two dimensions (on a line when d = 1).
Dataset synth_blobs(std::size_t n, std::size_t d, std::size_t k, double separation, linalg::Rng& rng);
// The four XOR points with labels 0, 1, 1, 0.
Dataset synth_xor();

// Seeded per-epoch permutation cut into batches; the last batch may be short.
class BatchIterator {
public:
    BatchIterator(std::size_t n, std::size_t batch_size, std::uint64_t seed, bool shuffle = true);

    // Reshuffles for `epoch` (deterministic in seed and epoch) and rewinds.
    void start_epoch(std::size_t epoch);
    // Next batch of indices, empty once the epoch is exhausted.
    std::span<const std::size_t> next();

    std::size_t batch_count() const noexcept;
    std::size_t batch_size() const noexcept { return batch_size_; }
    std::span<const std::size_t> permutation() const noexcept { return order_; }

private:
    std::size_t batch_size_;
    std::uint64_t seed_;
    bool shuffle_;
    std::vector<std::size_t> order_;
    std::size_t cursor_ = 0;
};

struct Batch {
    Matrix x;
    Matrix t;  // one-hot targets
    std::vector<std::size_t> labels;
};

Batch make_batch(const Dataset& data, std::span<const std::size_t> indices);

}  // namespace al::data
