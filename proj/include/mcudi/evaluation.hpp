/// @file evaluation.hpp
/// @brief Detection-accuracy scoring, retraining-strategy simulation, and
///        label-cost accounting.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mcudi/data.hpp"
#include "mcudi/forest.hpp"
#include "mcudi/ground_truth.hpp"

namespace mcudi {

/// Confusion counts over drift/non-drift periods.
///
/// The class mapping is deliberately inverted from the epidemiological
/// convention: TN counts correctly identified drifts and TP counts correctly
/// identified non-drifts, so Specificity = TN/(TN+FP) is the fraction of
/// drifts caught and Sensitivity = TP/(TP+FN) the fraction of non-drifts
/// recognized. An always-alarming detector therefore scores specificity 1.0
/// and sensitivity 0.0.
struct DetectionAccuracy {
    int tn = 0;  // drift, alarmed
    int fp = 0;  // drift, missed
    int tp = 0;  // non-drift, quiet
    int fn = 0;  // non-drift, false alarm
    std::optional<double> specificity;        // empty when no drifts were scored
    std::optional<double> sensitivity;        // empty when no non-drifts were scored
    std::optional<double> balanced_accuracy;  // mean of the two when both defined
};

/// Scores per-period alarms against ground truth over non-excluded periods.
/// Throws DataError when a non-excluded period has no verdict.
DetectionAccuracy score_detector(const std::map<int, bool>& alarms,
                                 const std::vector<GroundTruthLabel>& truth);

enum class Strategy { Static, Periodic, Ks, Mcudi };

std::string to_string(Strategy s);
Strategy strategy_from_string(const std::string& s);

struct StrategyOptions {
    int window = 1;       // sliding-window width in periods for retraining
    double alpha = 0.05;  // detector significance level
    /// Label-cost pipeline mode: a triggered retrain uses only the flagged
    /// batch instead of the most recent `window` periods.
    bool retrain_on_flagged_only = false;
};

struct SeedRun {
    std::uint64_t seed = 0;
    int retrain_count = 0;
    std::size_t label_cost = 0;         // samples annotated across all retrains
    std::vector<int> retrain_periods;   // verdict log
    std::vector<std::optional<double>> period_auc;  // index 0 <-> period 1
    int skipped_periods = 0;            // single-class periods not scored
    int skipped_retrains = 0;           // retrains blocked by a single-class window
};

struct StrategyRunReport {
    Strategy strategy = Strategy::Static;
    double mean_roc_auc = 0.0;                  // equal period weight, mean over seeds
    double mean_roc_auc_sample_weighted = 0.0;  // weighted by scored batch sizes
    double retrain_count = 0.0;                 // mean over seeds
    int total_periods = 0;                      // testing periods (batches - 1)
    double label_cost = 0.0;                    // mean over seeds
    int window = 1;
    std::vector<SeedRun> per_seed;
};

/// Simulates one maintenance strategy over the batch sequence: train on the
/// first batch, then for each later period score ROC AUC with the current
/// model and consult the strategy about retraining. Detector-driven
/// strategies compare the current model's training window against the
/// incoming batch. On retrain the window slides to the most recent
/// `options.window` periods.
StrategyRunReport run_strategy(const std::vector<Batch>& batches, Strategy strategy,
                               const ForestHyperparams& hp,
                               const std::vector<std::uint64_t>& seeds,
                               const StrategyOptions& options = {});

struct LabelCostReport {
    StrategyRunReport detector_arm;  // retrains only on alarms, only the flagged batch
    StrategyRunReport periodic_arm;  // annotates and incorporates every batch
    double savings = 0.0;            // periodic cost - detector-arm cost (mean over seeds)
};

/// The maintenance-pipeline comparison: periodic annotation of every testing
/// batch versus annotation of drift-flagged batches only.
LabelCostReport run_label_cost_pipeline(const std::vector<Batch>& batches,
                                        const ForestHyperparams& hp,
                                        const std::vector<std::uint64_t>& seeds,
                                        const StrategyOptions& options = {});

}  // namespace mcudi
