#include "al/core/al_grad_check.hpp"

#include <algorithm>

#include "al/nn/loss.hpp"

namespace al::core {

namespace {

struct Boundary {
    Matrix s;
    Matrix t;
};

std::vector<Matrix*> block_params(Component& c, char which) {
    switch (which) {
    case 'f': return c.f().parameters();
    case 'g': return c.g().parameters();
    case 'b': return c.b().parameters();
    default: return c.h().parameters();
    }
}

const nn::BlockGrads& block_grads(const ComponentGradients& g, char which) {
    switch (which) {
    case 'f': return g.f;
    case 'g': return g.g;
    case 'b': return g.b;
    default: return g.h;
    }
}

std::vector<Matrix*> component_params(Component& c) {
    std::vector<Matrix*> all;
    for (char which : {'f', 'g', 'b', 'h'})
        for (Matrix* p : block_params(c, which))
            all.push_back(p);
    return all;
}

}  // namespace

ALGradCheckReport check_al_gradients(ALNetwork& net, const Matrix& x, const Matrix& t0,
                                     const ALCheckOptions& options) {
    const std::size_t count = net.component_count();

    // Messages entering each component, from an unperturbed forward pass.
    std::vector<Boundary> inputs;
    std::vector<Matrix> frozen_t;
    {
        Matrix s = x, t = t0;
        for (auto& c : net.components()) {
            inputs.push_back({s, t});
            auto out = c.forward(s, t, false);
            frozen_t.push_back(out.t);
            s = std::move(out.s);
            t = std::move(out.t);
        }
    }

    ALGradCheckReport report;
    for (std::size_t i = 0; i < count; ++i) {
        Component& c = net.components()[i];
        const Boundary& in = inputs[i];
        ComponentOutput scratch;
        ComponentGradients grads = c.gradients(in.s, in.t, scratch);
        if (i == 0 && options.planted_fault != 0.0)
            grads.f.layers.front().weights.data()[0] += options.planted_fault;

        const auto mse1 = [&] { return nn::mse_loss(c.b().infer(c.f().infer(in.s)), frozen_t[i]); };
        const auto mse2 = [&] { return nn::mse_loss(c.h().infer(c.g().infer(in.t)), in.t); };

        for (const auto& [flow, loss, owned] :
             {std::tuple{"associated", std::function<double()>(mse1), std::string("fb")},
              std::tuple{"autoencoder", std::function<double()>(mse2), std::string("gh")}}) {
            for (char which : {'f', 'g', 'b', 'h'}) {
                FlowCheckRow row;
                row.component = i + 1;
                row.block = std::string(1, which);
                row.flow = flow;
                row.expect_zero = owned.find(which) == std::string::npos;
                const auto params = block_params(c, which);
                if (row.expect_zero) {
                    row.result = nn::check_gradients(loss, params, {}, options.eps);
                } else {
                    const auto flat = nn::flatten(block_grads(grads, which));
                    row.result = nn::check_gradients(loss, params, flat, options.eps);
                }
                report.rows.push_back(std::move(row));
            }
        }

        // local-obj_i against every parameter of every other component.
        const auto local_obj = [&] { return mse1() + mse2(); };
        for (std::size_t j = 0; j < count; ++j) {
            if (j == i)
                continue;
            FlowCheckRow row;
            row.component = i + 1;
            row.block = "c" + std::to_string(j + 1);
            row.flow = "local-objective";
            row.expect_zero = true;
            const auto params = component_params(net.components()[j]);
            row.result = nn::check_gradients(local_obj, params, {}, options.eps);
            report.rows.push_back(std::move(row));
        }
    }

    for (const auto& row : report.rows) {
        if (row.expect_zero)
            report.max_zero_error = std::max(report.max_zero_error, row.result.max_numeric);
        else
            report.max_rel_error = std::max(report.max_rel_error, row.result.max_rel_error);
    }
    return report;
}

}  // namespace al::core
