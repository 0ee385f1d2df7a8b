#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace al::core {

class PlanError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Number of dense layers in each sub-network of a component.
struct BlockDepths {
    std::size_t f = 1;
    std::size_t g = 1;
    std::size_t b = 2;
    std::size_t h = 1;

    friend bool operator==(const BlockDepths&, const BlockDepths&) = default;
};

struct ComponentDims {
    std::size_t s_in = 0;
    std::size_t s_out = 0;
    std::size_t t_in = 0;
    std::size_t t_out = 0;
    // Width of the bridge's hidden layers; its output is always t_out.
    std::size_t bridge_hidden = 0;

    friend bool operator==(const ComponentDims&, const ComponentDims&) = default;
};

// Widths of an AL network. Component i maps s_{i-1} -> s_i (f), t_{i-1} -> t_i (g),
// s_i -> t_i (b) and t_i -> t_{i-1} (h); s_0 is the input and t_0 the one-hot target.
struct NetworkPlan {
    std::string name = "inline";
    std::size_t input_dim = 0;
    std::size_t target_dim = 0;
    std::vector<std::size_t> s_widths;
    std::vector<std::size_t> t_widths;
    // Hidden width of the top bridge. 0 means "same as the top t width".
    std::size_t top_bridge_hidden = 0;
    BlockDepths depths;

    std::size_t component_count() const noexcept { return s_widths.size(); }
    std::vector<ComponentDims> components() const;
    void validate() const;

    friend bool operator==(const NetworkPlan&, const NetworkPlan&) = default;
};

// Named plans:
//   paper-mlp   two components, s = t = 1024, top bridge hidden 5120
//   desk-mlp    two components, s = t = 256, top bridge hidden 512
//   desk-mlp-3  three components, s = t = 128, top bridge hidden 256
//   tiny        one component, s = t = 16
// Inline plans list component widths, optionally "s/t" pairs, and an optional
// "@hidden" top bridge width: "256,256@512" or "64/32,64/32".
NetworkPlan make_plan(std::string_view spec, std::size_t input_dim, std::size_t target_dim);

nlohmann::json to_json(const NetworkPlan& plan);
NetworkPlan plan_from_json(const nlohmann::json& j);

// Parameter count of the inference path: every f, every h and the top bridge.
std::size_t effective_parameter_count(const NetworkPlan& plan);

// Widths of the dense layers of a sub-network, input first.
std::vector<std::size_t> f_widths(const ComponentDims& d, const BlockDepths& depths);
std::vector<std::size_t> g_widths(const ComponentDims& d, const BlockDepths& depths);
std::vector<std::size_t> b_widths(const ComponentDims& d, const BlockDepths& depths);
std::vector<std::size_t> h_widths(const ComponentDims& d, const BlockDepths& depths);

}  // namespace al::core
