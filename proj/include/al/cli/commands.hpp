#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace al::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kNumericError = 3, kGradcheckFailed = 4 };

// Gradient-check threshold shared by the gradcheck command and its callers.
inline constexpr double kGradTolerance = 1e-4;
inline constexpr double kCrossComponentTolerance = 1e-7;

struct GradcheckRow {
    std::string suite;      // "nn", "al" or "bp"
    std::string component;  // component index for AL rows, empty otherwise
    std::string block;
    std::string flow;
    bool expect_zero = false;
    double max_rel_error = 0.0;
    double max_numeric = 0.0;
    std::size_t checked = 0;
    bool pass = false;
};

struct GradcheckOptions {
    std::string plan = "5,4,4@6";
    std::uint64_t seed = 0;
    std::size_t input_dim = 6;
    std::size_t classes = 3;
    std::size_t batch = 4;
    bool inject_fault = false;
};

struct GradcheckSummary {
    std::vector<GradcheckRow> rows;
    double max_rel_error = 0.0;
    double max_cross_component = 0.0;
    bool pass = true;
};

// Every finite-difference suite: standalone blocks, the AL flows of each
// component, and the full BP stack built from the same plan.
GradcheckSummary run_gradcheck(const GradcheckOptions& options);

// Entry point behind the `alearn` executable; args exclude the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace al::cli
