/// @file config.hpp
/// @brief Run configuration: schema, hyperparameters, and the pinned
///        constants every command echoes back into its report directory.
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mcudi/data.hpp"
#include "mcudi/forest.hpp"
#include "mcudi/synthetic.hpp"

namespace mcudi {

/// The ten pinned default seeds shared by every command for reproducibility.
std::vector<std::uint64_t> default_seeds();

struct RunConfig {
    std::optional<DatasetSchema> schema;  // required by CSV-consuming commands
    ForestHyperparams hyperparams;
    std::vector<std::uint64_t> seeds = default_seeds();
    double alpha = 0.05;
    int folds = 10;
    int window = 1;
    std::string output_dir = "out";

    void validate() const;  // throws UsageError
    const DatasetSchema& require_schema() const;
};

/// Parses a JSON config file. Unknown keys are rejected to catch typos.
RunConfig load_config(const std::filesystem::path& path);
RunConfig config_from_json(const nlohmann::json& j);

/// Full effective configuration, defaults included.
nlohmann::json effective_config(const RunConfig& config);

/// Synthetic-stream spec file: the generator parameters plus its seed.
struct SynthSpecFile {
    SynthSpec spec;
    std::uint64_t seed = 0;
};

SynthSpecFile load_synth_spec(const std::filesystem::path& path);

}  // namespace mcudi
