/// @file forest.hpp
/// @brief Random-forest binary classifier with Gini splits and MDI importances.
///
/// Training is deterministic for a fixed (data, hyperparams, seed): each tree
/// owns an RNG stream seeded with tree_seed(seed, index), so results do not
/// depend on how trees are scheduled across threads. Within a tree the stream
/// is consumed in a fixed order: first the n bootstrap row draws (via
/// Rng::index), then per-node feature subsampling as nodes are expanded
/// depth-first, left child first.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mcudi/rng.hpp"
#include "mcudi/types.hpp"

namespace mcudi {

enum class MaxFeatures {
    Sqrt,  // floor(sqrt(d)) candidate features per split
    All,
};

struct ForestHyperparams {
    int n_trees = 100;
    std::optional<int> max_depth;  // empty -> unbounded
    int min_samples_split = 2;
    MaxFeatures max_features = MaxFeatures::Sqrt;
    bool bootstrap = true;

    void validate() const;
};

struct TreeNode {
    int left = -1;   // -1 -> leaf
    int right = -1;
    int feature = -1;
    double threshold = 0.0;       // x[feature] <= threshold goes left
    double prob1 = 0.0;           // class-1 frequency among training rows here
    std::size_t n_samples = 0;    // training rows reaching this node
    double impurity = 0.0;        // Gini at this node
    double impurity_decrease = 0.0;  // n*g - n_l*g_l - n_r*g_r for split nodes

    bool is_leaf() const { return left < 0; }
};

struct Tree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root; empty only if untrained

    double predict_proba(std::span<const double> row) const;
};

struct ForestModel {
    std::vector<Tree> trees;
    std::vector<double> importances;  // MDI, normalized to sum 1 when any split exists
    ForestHyperparams hp;
    std::uint64_t train_seed = 0;
    std::size_t n_features = 0;
};

/// RNG stream seed for one tree; exposed so audits can replay a tree's draws.
inline std::uint64_t tree_seed(std::uint64_t forest_seed, std::size_t tree_index) {
    return mix_seed(forest_seed, tree_index);
}

/// Trains the ensemble. Requires n >= 2 rows and both classes present
/// (throws SingleClassError otherwise). Importances are the raw per-feature
/// impurity decreases summed within each tree, averaged across trees, then
/// normalized to sum 1.
ForestModel train_forest(const Matrix& features, const std::vector<int>& labels,
                         const ForestHyperparams& hp, std::uint64_t seed);

/// Mean of per-tree leaf class-1 frequencies, one value per row in [0, 1].
std::vector<double> predict_proba(const ForestModel& model, const Matrix& features);

/// Thresholds probabilities at 0.5; an exact 0.5 maps to class 1.
std::vector<int> predict(const ForestModel& model, const Matrix& features);

struct ImportantFeatureSet {
    std::vector<std::size_t> indices;  // ascending; importance strictly above the mean
    double threshold = 0.0;            // the mean importance used as the cut
};

/// Features whose importance is strictly greater than the mean importance.
/// A uniform importance vector yields an empty set.
ImportantFeatureSet important_features(const ForestModel& model);

}  // namespace mcudi
