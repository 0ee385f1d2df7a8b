#include "al/core/plan.hpp"

#include <charconv>

namespace al::core {

namespace {

std::vector<std::size_t> chain(std::size_t in, std::size_t hidden, std::size_t out, std::size_t depth) {
    std::vector<std::size_t> widths{in};
    for (std::size_t i = 1; i < depth; ++i)
        widths.push_back(hidden);
    widths.push_back(out);
    return widths;
}

std::size_t dense_params(const std::vector<std::size_t>& widths) {
    std::size_t n = 0;
    for (std::size_t i = 0; i + 1 < widths.size(); ++i)
        n += widths[i] * widths[i + 1] + widths[i + 1];
    return n;
}

std::size_t parse_count(std::string_view text, std::string_view spec) {
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || value == 0)
        throw PlanError("bad width '" + std::string(text) + "' in plan '" + std::string(spec) + "'");
    return value;
}

}  // namespace

std::vector<ComponentDims> NetworkPlan::components() const {
    std::vector<ComponentDims> out;
    for (std::size_t i = 0; i < s_widths.size(); ++i) {
        ComponentDims d;
        d.s_in = i == 0 ? input_dim : s_widths[i - 1];
        d.s_out = s_widths[i];
        d.t_in = i == 0 ? target_dim : t_widths[i - 1];
        d.t_out = t_widths[i];
        const bool top = i + 1 == s_widths.size();
        d.bridge_hidden = top && top_bridge_hidden > 0 ? top_bridge_hidden : d.t_out;
        out.push_back(d);
    }
    return out;
}

void NetworkPlan::validate() const {
    if (input_dim == 0 || target_dim == 0)
        throw PlanError("plan '" + name + "': input and target dimensions must be positive");
    if (s_widths.empty())
        throw PlanError("plan '" + name + "': need at least one component");
    if (s_widths.size() != t_widths.size())
        throw PlanError("plan '" + name + "': " + std::to_string(s_widths.size()) + " s widths but " +
                        std::to_string(t_widths.size()) + " t widths");
    for (std::size_t i = 0; i < s_widths.size(); ++i)
        if (s_widths[i] == 0 || t_widths[i] == 0)
            throw PlanError("plan '" + name + "': component " + std::to_string(i + 1) + " has a zero width");
    if (depths.f == 0 || depths.g == 0 || depths.b == 0 || depths.h == 0)
        throw PlanError("plan '" + name + "': every sub-network needs at least one layer");
}

NetworkPlan make_plan(std::string_view spec, std::size_t input_dim, std::size_t target_dim) {
    NetworkPlan plan;
    plan.input_dim = input_dim;
    plan.target_dim = target_dim;
    plan.name = std::string(spec);
    if (spec == "paper-mlp") {
        plan.s_widths = plan.t_widths = {1024, 1024};
        plan.top_bridge_hidden = 5120;
    } else if (spec == "desk-mlp") {
        plan.s_widths = plan.t_widths = {256, 256};
        plan.top_bridge_hidden = 512;
    } else if (spec == "desk-mlp-3") {
        plan.s_widths = plan.t_widths = {128, 128, 128};
        plan.top_bridge_hidden = 256;
    } else if (spec == "tiny") {
        plan.s_widths = plan.t_widths = {16};
    } else {
        plan.name = "inline";
        std::string_view widths = spec;
        if (const auto at = spec.find('@'); at != std::string_view::npos) {
            plan.top_bridge_hidden = parse_count(spec.substr(at + 1), spec);
            widths = spec.substr(0, at);
        }
        if (widths.empty())
            throw PlanError("unknown plan '" + std::string(spec) + "'");
        std::size_t pos = 0;
        while (pos <= widths.size()) {
            const auto comma = widths.find(',', pos);
            const auto item = widths.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
            if (const auto slash = item.find('/'); slash != std::string_view::npos) {
                plan.s_widths.push_back(parse_count(item.substr(0, slash), spec));
                plan.t_widths.push_back(parse_count(item.substr(slash + 1), spec));
            } else {
                const auto w = parse_count(item, spec);
                plan.s_widths.push_back(w);
                plan.t_widths.push_back(w);
            }
            if (comma == std::string_view::npos)
                break;
            pos = comma + 1;
        }
    }
    plan.validate();
    return plan;
}

nlohmann::json to_json(const NetworkPlan& plan) {
    return {
        {"name", plan.name},
        {"input_dim", plan.input_dim},
        {"target_dim", plan.target_dim},
        {"s_widths", plan.s_widths},
        {"t_widths", plan.t_widths},
        {"top_bridge_hidden", plan.top_bridge_hidden},
        {"depths", {{"f", plan.depths.f}, {"g", plan.depths.g}, {"b", plan.depths.b}, {"h", plan.depths.h}}},
    };
}

NetworkPlan plan_from_json(const nlohmann::json& j) {
    try {
        NetworkPlan plan;
        plan.name = j.value("name", std::string("inline"));
        plan.input_dim = j.at("input_dim").get<std::size_t>();
        plan.target_dim = j.at("target_dim").get<std::size_t>();
        plan.s_widths = j.at("s_widths").get<std::vector<std::size_t>>();
        plan.t_widths = j.at("t_widths").get<std::vector<std::size_t>>();
        plan.top_bridge_hidden = j.value("top_bridge_hidden", std::size_t{0});
        if (j.contains("depths")) {
            const auto& d = j.at("depths");
            plan.depths.f = d.value("f", plan.depths.f);
            plan.depths.g = d.value("g", plan.depths.g);
            plan.depths.b = d.value("b", plan.depths.b);
            plan.depths.h = d.value("h", plan.depths.h);
        }
        plan.validate();
        return plan;
    } catch (const nlohmann::json::exception& e) {
        throw PlanError(std::string("malformed plan: ") + e.what());
    }
}

std::vector<std::size_t> f_widths(const ComponentDims& d, const BlockDepths& depths) {
    return chain(d.s_in, d.s_out, d.s_out, depths.f);
}

std::vector<std::size_t> g_widths(const ComponentDims& d, const BlockDepths& depths) {
    return chain(d.t_in, d.t_out, d.t_out, depths.g);
}

std::vector<std::size_t> b_widths(const ComponentDims& d, const BlockDepths& depths) {
    return chain(d.s_out, d.bridge_hidden, d.t_out, depths.b);
}

std::vector<std::size_t> h_widths(const ComponentDims& d, const BlockDepths& depths) {
    return chain(d.t_out, d.t_out, d.t_in, depths.h);
}

std::size_t effective_parameter_count(const NetworkPlan& plan) {
    const auto comps = plan.components();
    std::size_t n = dense_params(b_widths(comps.back(), plan.depths));
    for (const auto& d : comps)
        n += dense_params(f_widths(d, plan.depths)) + dense_params(h_widths(d, plan.depths));
    return n;
}

}  // namespace al::core
