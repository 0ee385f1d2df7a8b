#include <cmath>
#include <numbers>

#include "al/data/dataset.hpp"

namespace al::data {

Dataset synth_blobs(std::size_t n, std::size_t d, std::size_t k, double separation, linalg::Rng& rng) {
    if (k < 2)
        throw DataError("synth_blobs needs at least two classes");
    if (d == 0)
        throw DataError("synth_blobs needs at least one dimension");
    Matrix centers(k, d);
    for (std::size_t c = 0; c < k; ++c) {
        if (d == 1) {
            centers(c, 0) = separation * static_cast<double>(c);
        } else {
            const double angle = 2.0 * std::numbers::pi * static_cast<double>(c) / static_cast<double>(k);
            centers(c, 0) = separation * std::cos(angle);
            centers(c, 1) = separation * std::sin(angle);
        }
    }
    Dataset ds;
    ds.n_classes = k;
    ds.x = Matrix(n, d);
    ds.y.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t c = i % k;
        ds.y[i] = c;
        for (std::size_t f = 0; f < d; ++f)
            ds.x(i, f) = centers(c, f) + rng.normal();
    }
    return ds;
}

Dataset synth_xor() {
    Dataset ds;
    ds.n_classes = 2;
    ds.x = Matrix::from_rows({{0, 0}, {0, 1}, {1, 0}, {1, 1}});
    ds.y = {0, 1, 1, 0};
    return ds;
}

}  // namespace al::data
