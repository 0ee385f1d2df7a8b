#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace al::nn {

// Raised when an operation needs state that is not there, such as a backward
// pass without a preceding training-mode forward.
class StateError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// NaN or Inf showed up in activations or losses.
class NumericError : public std::runtime_error {
public:
    NumericError(const std::string& what, std::optional<std::size_t> component = std::nullopt,
                 std::optional<std::size_t> batch = std::nullopt)
        : std::runtime_error(what), component_(component), batch_(batch) {}

    std::optional<std::size_t> component() const noexcept { return component_; }
    std::optional<std::size_t> batch() const noexcept { return batch_; }

private:
    std::optional<std::size_t> component_;
    std::optional<std::size_t> batch_;
};

}  // namespace al::nn
