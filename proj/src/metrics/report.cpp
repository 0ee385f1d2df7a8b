#include "al/metrics/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace al::metrics {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

}  // namespace

std::string to_csv_row(const MetricsRecord& r) {
    std::ostringstream os;
    os << r.epoch << ',' << r.mode << ',' << num(r.lr) << ',';
    if (r.train_loss)
        os << num(*r.train_loss);
    os << ',' << num(r.train_accuracy) << ',';
    if (r.test_accuracy)
        os << num(*r.test_accuracy);
    os << ',';
    for (std::size_t i = 0; i < r.components.size(); ++i)
        os << (i ? " " : "") << num(r.components[i].mse1);
    os << ',';
    for (std::size_t i = 0; i < r.components.size(); ++i)
        os << (i ? " " : "") << num(r.components[i].mse2);
    return os.str();
}

void write_csv(std::ostream& os, const std::vector<MetricsRecord>& records) {
    os << kCsvHeader << '\n';
    for (const auto& r : records)
        os << to_csv_row(r) << '\n';
}

void write_csv(const std::filesystem::path& path, const std::vector<MetricsRecord>& records) {
    std::ofstream os(path, std::ios::trunc);
    if (!os)
        throw std::runtime_error("cannot write " + path.string());
    write_csv(os, records);
}

nlohmann::json to_json(const MetricsRecord& r) {
    nlohmann::json j{{"epoch", r.epoch},
                     {"mode", r.mode},
                     {"lr", r.lr},
                     {"train_accuracy", r.train_accuracy},
                     {"wall_clock_s", r.wall_clock_s}};
    j["train_loss"] = r.train_loss ? nlohmann::json(*r.train_loss) : nlohmann::json(nullptr);
    j["test_accuracy"] = r.test_accuracy ? nlohmann::json(*r.test_accuracy) : nlohmann::json(nullptr);
    j["components"] = nlohmann::json::array();
    for (const auto& c : r.components)
        j["components"].push_back({{"component", c.component}, {"mse1", c.mse1}, {"mse2", c.mse2}});
    return j;
}

nlohmann::json to_json(const ClassGeometry& g) {
    return {{"inter_class_distance", g.inter_class_distance},
            {"intra_class_distance", g.intra_class_distance},
            {"ratio", g.ratio}};
}

void write_json(const std::filesystem::path& path, const nlohmann::json& value) {
    std::ofstream os(path, std::ios::trunc);
    if (!os)
        throw std::runtime_error("cannot write " + path.string());
    os << value.dump(2) << '\n';
}

}  // namespace al::metrics
