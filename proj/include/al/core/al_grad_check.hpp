#pragma once

#include <string>
#include <vector>

#include "al/core/network.hpp"
#include "al/nn/grad_check.hpp"

namespace al::core {

// One (component, sub-network, flow) comparison. Rows with expect_zero set
// compare a finite-difference gradient that must vanish; the others compare
// analytic against numeric gradients.
struct FlowCheckRow {
    std::size_t component = 0;
    std::string block;  // "f", "g", "b", "h" or "c<j>" for a whole other component
    std::string flow;   // "associated", "autoencoder" or "local-objective"
    bool expect_zero = false;
    nn::GradCheckResult result;
};

struct ALGradCheckReport {
    std::vector<FlowCheckRow> rows;
    double max_rel_error = 0.0;   // over rows that compare real gradients
    double max_zero_error = 0.0;  // largest |numeric| over expect_zero rows
};

struct ALCheckOptions {
    double eps = 1e-5;
    double planted_fault = 0.0;  // added to the first analytic f gradient of component 1
};

// Finite-difference audit of every component's two flows on a batch.
// Component boundaries and t_i inside mse1 are held at the values an
// unperturbed forward pass produced, exactly as training treats them.
ALGradCheckReport check_al_gradients(ALNetwork& net, const Matrix& x, const Matrix& t0,
                                     const ALCheckOptions& options = {});

}  // namespace al::core
