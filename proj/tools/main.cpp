/// @file main.cpp
/// @brief CLI front end: ground-truth, evaluate, label-cost, and synth.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mcudi/commands.hpp"

namespace {

mcudi::RunConfig load_run_config(const std::string& config_path,
                                 const std::string& output_dir_override) {
    mcudi::RunConfig config = config_path.empty() ? mcudi::RunConfig{}
                                                  : mcudi::load_config(config_path);
    if (!output_dir_override.empty()) config.output_dir = output_dir_override;
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Label-free drift indication and retraining evaluation for "
                 "failure-prediction models"};
    app.require_subcommand(1);

    std::string config_path, csv_path, out_dir, spec_path, out_csv;
    std::vector<std::string> detectors = {"mcudi", "ks"};

    auto add_common = [&](CLI::App* cmd, bool config_required) {
        auto* opt = cmd->add_option("--config", config_path, "JSON run config");
        if (config_required) opt->required();
        cmd->add_option("--csv", csv_path, "input CSV file")->required();
        cmd->add_option("--out-dir", out_dir, "override config output_dir");
    };

    auto* gt = app.add_subcommand("ground-truth",
                                  "Label each period drift/non-drift from error rates");
    add_common(gt, true);

    auto* ev = app.add_subcommand("evaluate",
                                  "Score detectors against ground truth and simulate "
                                  "retraining strategies");
    add_common(ev, true);
    ev->add_option("--detectors", detectors,
                   "detectors to evaluate (static, periodic, ks, mcudi)")
        ->delimiter(',');

    auto* lc = app.add_subcommand("label-cost",
                                  "Compare annotation costs: detector-gated vs periodic "
                                  "retraining");
    add_common(lc, true);

    auto* sy = app.add_subcommand("synth", "Generate a synthetic CSV fixture + ledger");
    sy->add_option("--spec", spec_path, "JSON synthetic-stream spec")->required();
    sy->add_option("--out", out_csv, "output CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? mcudi::kExitOk : mcudi::kExitUsage;
    }

    try {
        if (gt->parsed()) {
            mcudi::cmd_ground_truth(load_run_config(config_path, out_dir), csv_path);
        } else if (ev->parsed()) {
            mcudi::cmd_evaluate(load_run_config(config_path, out_dir), csv_path, detectors);
        } else if (lc->parsed()) {
            mcudi::cmd_label_cost(load_run_config(config_path, out_dir), csv_path);
        } else if (sy->parsed()) {
            mcudi::cmd_synth(spec_path, out_csv);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return mcudi::exit_code_for(e);
    }
    return mcudi::kExitOk;
}
