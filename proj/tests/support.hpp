#pragma once

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "al/linalg/matrix.hpp"
#include "al/linalg/rng.hpp"

namespace al::test {

using linalg::Matrix;

inline ::testing::AssertionResult near(const Matrix& a, const Matrix& b, double tol) {
    if (!a.same_shape(b))
        return ::testing::AssertionFailure() << "shape " << a.shape_str() << " vs " << b.shape_str();
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::abs(a.data()[i] - b.data()[i]) > tol)
            return ::testing::AssertionFailure()
                   << "entry " << i << ": " << a.data()[i] << " vs " << b.data()[i] << " (tol " << tol << ")";
    return ::testing::AssertionSuccess();
}

// MNIST directory from the environment or the configure-time default; empty when unknown.
inline std::string mnist_dir() {
    if (const char* env = std::getenv("AL_DATA_DIR"); env && *env)
        return env;
    return AL_TEST_DATA_DIR;
}

inline std::filesystem::path tmp_dir(const std::string& name) {
    auto dir = std::filesystem::path(AL_TEST_TMP_DIR) / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace al::test
