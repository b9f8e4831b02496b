#include "mcudi/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include "mcudi/data.hpp"

namespace mcudi {

void ForestHyperparams::validate() const {
    if (n_trees < 1) throw UsageError("hyperparams: n_trees must be >= 1");
    if (max_depth && *max_depth < 1) throw UsageError("hyperparams: max_depth must be >= 1");
    if (min_samples_split < 2)
        throw UsageError("hyperparams: min_samples_split must be >= 2");
}

double Tree::predict_proba(std::span<const double> row) const {
    int i = 0;
    while (!nodes[i].is_leaf())
        i = row[nodes[i].feature] <= nodes[i].threshold ? nodes[i].left : nodes[i].right;
    return nodes[i].prob1;
}

namespace {

constexpr double kMinGain = 1e-12;

double gini(std::size_t c0, std::size_t c1) {
    const auto m = static_cast<double>(c0 + c1);
    return 1.0 - (static_cast<double>(c0) * c0 + static_cast<double>(c1) * c1) / (m * m);
}

struct BestSplit {
    double gain = -1.0;
    int feature = -1;
    double threshold = 0.0;
    std::size_t n_left = 0;
    double gini_left = 0.0;
    double gini_right = 0.0;
};

struct PendingNode {
    int node = 0;
    std::size_t lo = 0;
    std::size_t hi = 0;
    int depth = 0;
};

class TreeBuilder {
public:
    TreeBuilder(const Matrix& x, const std::vector<int>& y, const ForestHyperparams& hp,
                std::uint64_t seed)
        : x_(x), y_(y), hp_(hp), rng_(seed) {
        const std::size_t d = x_.cols();
        feature_pool_.resize(d);
        std::iota(feature_pool_.begin(), feature_pool_.end(), 0);
        n_candidates_ = hp_.max_features == MaxFeatures::All
                            ? d
                            : std::max<std::size_t>(
                                  1, static_cast<std::size_t>(
                                         std::floor(std::sqrt(static_cast<double>(d)))));
    }

    Tree build(std::vector<double>& importance_out) {
        const std::size_t n = x_.rows();
        samples_.resize(n);
        if (hp_.bootstrap) {
            for (std::size_t i = 0; i < n; ++i) samples_[i] = rng_.index(n);
        } else {
            std::iota(samples_.begin(), samples_.end(), std::size_t{0});
        }
        importance_out.assign(x_.cols(), 0.0);

        Tree tree;
        tree.nodes.emplace_back();
        std::vector<PendingNode> stack;
        stack.push_back({0, 0, n, 0});
        while (!stack.empty()) {
            const PendingNode cur = stack.back();
            stack.pop_back();
            expand(tree, cur, stack, importance_out);
        }
        return tree;
    }

private:
    void expand(Tree& tree, const PendingNode& cur, std::vector<PendingNode>& stack,
                std::vector<double>& importance) {
        const std::size_t m = cur.hi - cur.lo;
        std::size_t c1 = 0;
        for (std::size_t i = cur.lo; i < cur.hi; ++i) c1 += y_[samples_[i]] == 1;
        const std::size_t c0 = m - c1;
        const double node_gini = gini(c0, c1);

        TreeNode& node = tree.nodes[cur.node];
        node.n_samples = m;
        node.impurity = node_gini;
        node.prob1 = static_cast<double>(c1) / static_cast<double>(m);

        const bool can_split =
            m >= static_cast<std::size_t>(hp_.min_samples_split) && node_gini > 0.0 &&
            (!hp_.max_depth || cur.depth < *hp_.max_depth);
        if (!can_split) return;

        const BestSplit best = find_best_split(cur.lo, cur.hi, c0, c1, node_gini);
        if (best.gain <= kMinGain) return;

        const auto md = static_cast<double>(m);
        const auto nl = static_cast<double>(best.n_left);
        const auto nr = md - nl;
        tree.nodes[cur.node].feature = best.feature;
        tree.nodes[cur.node].threshold = best.threshold;
        tree.nodes[cur.node].impurity_decrease =
            md * node_gini - nl * best.gini_left - nr * best.gini_right;
        importance[static_cast<std::size_t>(best.feature)] +=
            tree.nodes[cur.node].impurity_decrease;

        const auto mid = std::partition(samples_.begin() + static_cast<std::ptrdiff_t>(cur.lo),
                                        samples_.begin() + static_cast<std::ptrdiff_t>(cur.hi),
                                        [&](std::size_t idx) {
                                            return x_(idx, static_cast<std::size_t>(
                                                               best.feature)) <= best.threshold;
                                        });
        const auto split_at =
            static_cast<std::size_t>(mid - samples_.begin());

        const int left = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        const int right = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        tree.nodes[cur.node].left = left;
        tree.nodes[cur.node].right = right;
        // Right is pushed first so the left child is expanded next; the RNG
        // consumption order is part of the determinism contract.
        stack.push_back({right, split_at, cur.hi, cur.depth + 1});
        stack.push_back({left, cur.lo, split_at, cur.depth + 1});
    }

    BestSplit find_best_split(std::size_t lo, std::size_t hi, std::size_t c0,
                              std::size_t c1, double node_gini) {
        const std::size_t d = x_.cols();
        const std::size_t m = hi - lo;

        // Candidate features, iterated in ascending order so that equal gains
        // resolve to the lowest feature index.
        const std::size_t k = n_candidates_;
        if (k < d) {
            for (std::size_t i = 0; i < k; ++i) {
                const std::size_t j = i + rng_.index(d - i);
                std::swap(feature_pool_[i], feature_pool_[j]);
            }
            candidates_.assign(feature_pool_.begin(),
                               feature_pool_.begin() + static_cast<std::ptrdiff_t>(k));
            std::sort(candidates_.begin(), candidates_.end());
        } else {
            candidates_.resize(d);
            std::iota(candidates_.begin(), candidates_.end(), std::size_t{0});
        }

        BestSplit best;
        scratch_.assign(samples_.begin() + static_cast<std::ptrdiff_t>(lo),
                        samples_.begin() + static_cast<std::ptrdiff_t>(hi));
        for (std::size_t f : candidates_) {
            std::sort(scratch_.begin(), scratch_.end(), [&](std::size_t a, std::size_t b) {
                return x_(a, f) < x_(b, f);
            });
            std::size_t l0 = 0, l1 = 0;
            for (std::size_t pos = 1; pos < m; ++pos) {
                const std::size_t idx = scratch_[pos - 1];
                if (y_[idx] == 1) ++l1;
                else ++l0;
                const double v_prev = x_(idx, f);
                const double v_next = x_(scratch_[pos], f);
                if (v_prev == v_next) continue;

                const std::size_t r0 = c0 - l0;
                const std::size_t r1 = c1 - l1;
                const double gl = gini(l0, l1);
                const double gr = gini(r0, r1);
                const auto nl = static_cast<double>(pos);
                const auto nr = static_cast<double>(m - pos);
                const double gain =
                    node_gini - (nl * gl + nr * gr) / static_cast<double>(m);
                // Adjacent doubles can round the midpoint up to v_next, which
                // would leak v_next into the left child.
                double thr = std::midpoint(v_prev, v_next);
                if (thr >= v_next) thr = v_prev;
                // Gain ties are exact (the gain is a function of the integer
                // split counts) and frequent in small nodes. Resolving them by
                // threshold value keeps the choice stable under column
                // permutation; the feature index is only the final fallback.
                const bool better =
                    gain > best.gain ||
                    (gain == best.gain &&
                     (thr < best.threshold ||
                      (thr == best.threshold && static_cast<int>(f) < best.feature)));
                if (better) {
                    best.gain = gain;
                    best.feature = static_cast<int>(f);
                    best.threshold = thr;
                    best.n_left = pos;
                    best.gini_left = gl;
                    best.gini_right = gr;
                }
            }
        }
        return best;
    }

    const Matrix& x_;
    const std::vector<int>& y_;
    const ForestHyperparams& hp_;
    Rng rng_;
    std::size_t n_candidates_ = 0;
    std::vector<std::size_t> samples_;
    std::vector<std::size_t> scratch_;
    std::vector<std::size_t> feature_pool_;
    std::vector<std::size_t> candidates_;
};

}  // namespace

ForestModel train_forest(const Matrix& features, const std::vector<int>& labels,
                         const ForestHyperparams& hp, std::uint64_t seed) {
    hp.validate();
    if (features.rows() < 2) throw DataError("train_forest: need at least 2 rows");
    if (features.cols() < 1) throw DataError("train_forest: need at least 1 feature");
    if (features.rows() != labels.size())
        throw DataError("train_forest: features/labels length mismatch");
    if (!has_both_classes(labels))
        throw SingleClassError("train_forest: labels contain a single class");

    ForestModel model;
    model.hp = hp;
    model.train_seed = seed;
    model.n_features = features.cols();
    const auto n_trees = static_cast<std::size_t>(hp.n_trees);
    model.trees.resize(n_trees);
    std::vector<std::vector<double>> per_tree_importance(n_trees);

    const auto train_one = [&](std::size_t t) {
        TreeBuilder builder(features, labels, hp, tree_seed(seed, t));
        model.trees[t] = builder.build(per_tree_importance[t]);
    };

    const std::size_t n_threads =
        std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), n_trees);
    if (n_threads <= 1) {
        for (std::size_t t = 0; t < n_trees; ++t) train_one(t);
    } else {
        std::vector<std::thread> workers;
        workers.reserve(n_threads);
        for (std::size_t w = 0; w < n_threads; ++w) {
            workers.emplace_back([&, w] {
                for (std::size_t t = w; t < n_trees; t += n_threads) train_one(t);
            });
        }
        for (auto& th : workers) th.join();
    }

    model.importances.assign(features.cols(), 0.0);
    for (const auto& imp : per_tree_importance)
        for (std::size_t j = 0; j < imp.size(); ++j) model.importances[j] += imp[j];
    for (double& v : model.importances) v /= static_cast<double>(n_trees);
    const double total =
        std::accumulate(model.importances.begin(), model.importances.end(), 0.0);
    if (total > 0.0)
        for (double& v : model.importances) v /= total;
    return model;
}

std::vector<double> predict_proba(const ForestModel& model, const Matrix& features) {
    if (features.cols() != model.n_features)
        throw DataError("predict_proba: dimension mismatch");
    std::vector<double> probs(features.rows(), 0.0);
    for (std::size_t r = 0; r < features.rows(); ++r) {
        const auto row = features.row(r);
        double sum = 0.0;
        for (const Tree& tree : model.trees) sum += tree.predict_proba(row);
        probs[r] = sum / static_cast<double>(model.trees.size());
    }
    return probs;
}

std::vector<int> predict(const ForestModel& model, const Matrix& features) {
    const auto probs = predict_proba(model, features);
    std::vector<int> out(probs.size());
    for (std::size_t i = 0; i < probs.size(); ++i) out[i] = probs[i] >= 0.5 ? 1 : 0;
    return out;
}

ImportantFeatureSet important_features(const ForestModel& model) {
    ImportantFeatureSet set;
    if (model.importances.empty()) return set;
    const double mean =
        std::accumulate(model.importances.begin(), model.importances.end(), 0.0) /
        static_cast<double>(model.importances.size());
    set.threshold = mean;
    for (std::size_t j = 0; j < model.importances.size(); ++j)
        if (model.importances[j] > mean) set.indices.push_back(j);
    return set;
}

}  // namespace mcudi
