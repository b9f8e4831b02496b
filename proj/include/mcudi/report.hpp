/// @file report.hpp
/// @brief Serialization of results to line-delimited JSON records plus
///        human-readable summary tables. Output is byte-stable: re-running a
///        command on identical inputs rewrites identical files.
#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "mcudi/detectors.hpp"
#include "mcudi/evaluation.hpp"
#include "mcudi/ground_truth.hpp"

namespace mcudi {

nlohmann::json to_json(const KsResult& r);
nlohmann::json to_json(const DriftVerdict& v);
nlohmann::json to_json(const GroundTruthLabel& label);
nlohmann::json to_json(const DetectionAccuracy& acc);
nlohmann::json to_json(const StrategyRunReport& report);

/// Importance vector, hyperparameters, and seed for audit.
nlohmann::json model_summary(const ForestModel& model);

/// Detection-accuracy metrics averaged over seeds (confusion cells become
/// means and may be fractional for model-dependent detectors).
struct DetectionAccuracySummary {
    std::string detector;
    double tn = 0, fp = 0, tp = 0, fn = 0;
    std::optional<double> specificity, sensitivity, balanced_accuracy;
};

DetectionAccuracySummary summarize_accuracy(const std::string& detector,
                                            const std::vector<DetectionAccuracy>& per_seed);
nlohmann::json to_json(const DetectionAccuracySummary& s);

void write_text_file(const std::filesystem::path& path, const std::string& content);
void write_jsonl(const std::filesystem::path& path,
                 const std::vector<nlohmann::json>& records);

std::string format_accuracy_table(const std::vector<DetectionAccuracySummary>& rows);
std::string format_strategy_table(const std::vector<StrategyRunReport>& rows);

}  // namespace mcudi
