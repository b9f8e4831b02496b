/// @file metrics.hpp
/// @brief Error rate, seeded k-fold cross-validation, and rank-based ROC AUC.
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mcudi/forest.hpp"
#include "mcudi/types.hpp"

namespace mcudi {

/// Fraction of positions where prediction != label. Lengths must match, >= 1.
double error_rate(std::span<const int> predictions, std::span<const int> labels);

/// Pooled (micro-averaged) k-fold cross-validation error. Rows are shuffled
/// once with a stream derived from `seed`, then split into `folds` contiguous
/// parts; fold f trains a forest seeded with mix_seed(seed, f + 1). A fold
/// whose training split is single-class is skipped; if every fold is skipped
/// a SingleClassError is thrown.
double cross_val_error(const Matrix& features, const std::vector<int>& labels,
                       int folds, const ForestHyperparams& hp, std::uint64_t seed);

/// Probability that a random positive outranks a random negative, ties
/// counted as 1/2 (midrank formula). Throws UndefinedMetricError when only
/// one class is present.
double roc_auc(std::span<const double> scores, std::span<const int> labels);

}  // namespace mcudi
