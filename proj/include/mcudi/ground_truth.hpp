/// @file ground_truth.hpp
/// @brief Error-rate-based drift ground truth for consecutive batch pairs,
///        repeated over seeds with strict-majority voting.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mcudi/data.hpp"
#include "mcudi/forest.hpp"

namespace mcudi {

/// One seed's train-on-previous / test-on-current decision.
struct SeedDecision {
    bool excluded = false;
    std::string exclusion_reason;
    bool drift = false;
    double eps_train = 0.0;  // k-fold CV error on the training batch
    double eps_test = 0.0;   // error of the batch-trained model on the test batch
    double z = 0.0;
    double p_value = 1.0;
    std::optional<double> severity;
};

/// Trains on `train`, evaluates on `test`, and applies the two-proportion
/// Z-test to the CV error vs the test error (sample sizes are the full batch
/// sizes). A single-class training batch yields an excluded decision rather
/// than an error, mirroring how degenerate leading periods are handled.
SeedDecision label_batch_pair(const Batch& train, const Batch& test,
                              const ForestHyperparams& hp, int folds,
                              std::uint64_t seed, double alpha = 0.05);

struct GroundTruthLabel {
    int period_id = 0;              // the testing batch of the pair
    std::vector<bool> votes;        // aligned with the seed list
    std::vector<bool> seed_excluded;
    int drift_votes = 0;
    bool excluded = false;          // every seed excluded
    std::string exclusion_reason;
    bool is_drift = false;          // strict majority of the total seed count
    std::optional<double> severity_drift_votes;  // mean over drift-voting seeds
    std::optional<double> severity_all_seeds;    // mean over all non-excluded seeds
    double mean_eps_train = 0.0;
    double mean_eps_test = 0.0;
};

/// True iff votes form a strict majority of the total count.
inline bool strict_majority(std::size_t votes, std::size_t total) {
    return 2 * votes > total;
}

/// Labels every consecutive pair (P_{t-1}, P_t); the first batch has no
/// label. Deterministic for a fixed (batches, hp, folds, seeds, alpha).
std::vector<GroundTruthLabel> label_all_batches(const std::vector<Batch>& batches,
                                                const ForestHyperparams& hp, int folds,
                                                const std::vector<std::uint64_t>& seeds,
                                                double alpha = 0.05);

}  // namespace mcudi
