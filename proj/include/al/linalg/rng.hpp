#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "al/linalg/matrix.hpp"

namespace al::linalg {

// Deterministic generator: std::mt19937_64 (fully specified by the standard)
// with hand-written transforms, so sequences match across standard libraries.
//   uniform()  top 53 bits of one draw scaled to [0, 1)
//   normal()   Box-Muller on two uniforms, second value cached
//   index(n)   rejection sampling, unbiased
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t next_u64() { return engine_(); }
    double uniform();
    double normal();
    std::size_t index(std::size_t n);

    // Independent stream derived from this seed and a stream id (SplitMix64 mix).
    Rng derive(std::uint64_t stream) const;

    void shuffle(std::span<std::size_t> values);

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

// i.i.d. Normal(0, 2 / rows) entries; rows is the fan-in.
Matrix he_normal(std::size_t rows, std::size_t cols, Rng& rng);
Matrix normal_matrix(std::size_t rows, std::size_t cols, Rng& rng, double stddev = 1.0);
Matrix uniform_matrix(std::size_t rows, std::size_t cols, Rng& rng, double lo, double hi);

}  // namespace al::linalg
