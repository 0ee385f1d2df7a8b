#pragma once

// Run artifacts.
//
// metrics.csv, one MetricsRecord per row:
//   epoch,mode,lr,train_loss,train_accuracy,test_accuracy,mse1,mse2
// mse1 / mse2 hold the per-component values separated by spaces (component 1
// first) and are empty for BP runs; test_accuracy is empty without a test set.
// Wall-clock time is kept out of the CSV so identical runs give identical files.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "al/metrics/metrics.hpp"

namespace al::metrics {

inline constexpr const char* kCsvHeader = "epoch,mode,lr,train_loss,train_accuracy,test_accuracy,mse1,mse2";

std::string to_csv_row(const MetricsRecord& record);
void write_csv(std::ostream& os, const std::vector<MetricsRecord>& records);
void write_csv(const std::filesystem::path& path, const std::vector<MetricsRecord>& records);

nlohmann::json to_json(const MetricsRecord& record);
nlohmann::json to_json(const ClassGeometry& geometry);

void write_json(const std::filesystem::path& path, const nlohmann::json& value);

}  // namespace al::metrics
