/// @file commands.hpp
/// @brief The pipeline behind each CLI subcommand. Each command loads the
///        CSV, scales every batch with statistics fitted on the first period,
///        runs its stage, and writes reports into config.output_dir.
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mcudi/config.hpp"

namespace mcudi {

/// Exit codes shared by the commands and the CLI front end.
enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 2,   // bad flags, bad config/spec file
    kExitSchema = 3,  // CSV does not match the declared schema
    kExitData = 4,    // unusable data (empty file, single-class start, ...)
};

/// Writes ground_truth.jsonl, severity_series.jsonl, ingestion.json,
/// summary.txt, and effective_config.json.
void cmd_ground_truth(const RunConfig& config, const std::filesystem::path& csv);

/// Writes detection_accuracy.jsonl, strategy_runs.jsonl, verdicts.jsonl,
/// summary.txt, and effective_config.json. Static and periodic baselines are
/// always included.
void cmd_evaluate(const RunConfig& config, const std::filesystem::path& csv,
                  std::vector<std::string> detectors);

/// Writes label_cost.jsonl, summary.txt, and effective_config.json.
void cmd_label_cost(const RunConfig& config, const std::filesystem::path& csv);

/// Generates a synthetic CSV fixture plus its drift-injection ledger
/// (<out>.ledger.json).
void cmd_synth(const std::filesystem::path& spec_path,
               const std::filesystem::path& out_csv);

/// Maps a thrown error onto the documented exit code.
int exit_code_for(const std::exception& e);

}  // namespace mcudi
