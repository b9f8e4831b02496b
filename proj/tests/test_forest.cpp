#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mcudi/forest.hpp"
#include "mcudi/report.hpp"
#include "mcudi/rng.hpp"
#include "test_util.hpp"

using namespace mcudi;

namespace {

struct Dataset {
    Matrix x;
    std::vector<int> y;
};

/// label = sign(feature 0); remaining features are noise.
Dataset sign_dataset(std::size_t n, std::size_t d, std::uint64_t seed) {
    Rng rng(seed);
    Dataset ds;
    ds.x = Matrix(n, d);
    ds.y.resize(n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t j = 0; j < d; ++j) ds.x(r, j) = rng.normal();
        ds.y[r] = ds.x(r, 0) > 0 ? 1 : 0;
    }
    return ds;
}

ForestHyperparams small_hp(int n_trees = 20) {
    ForestHyperparams hp;
    hp.n_trees = n_trees;
    return hp;
}

}  // namespace

TEST_CASE("importances rank the informative feature above noise") {
    const auto ds = sign_dataset(300, 2, 41);
    const auto model = train_forest(ds.x, ds.y, small_hp(), 7);
    CHECK(model.importances[0] > model.importances[1]);
    CHECK(model.importances[0] > 0.5);
}

TEST_CASE("a constant feature never splits and gets zero importance") {
    Rng rng(5);
    Matrix x(200, 3);
    std::vector<int> y(200);
    for (std::size_t r = 0; r < 200; ++r) {
        x(r, 0) = rng.normal();
        x(r, 1) = rng.normal();
        x(r, 2) = 4.2;  // constant
        y[r] = (x(r, 0) > 0) != (x(r, 1) > 0) ? 1 : 0;  // xor of the first two
    }
    const auto model = train_forest(x, y, small_hp(50), 9);
    CHECK(model.importances[2] == 0.0);
}

TEST_CASE("importances are non-negative and sum to one") {
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 4ULL, 5ULL}) {
        const auto ds = sign_dataset(150, 5, seed);
        const auto model = train_forest(ds.x, ds.y, small_hp(), seed);
        double total = 0.0;
        for (double v : model.importances) {
            CHECK(v >= 0.0);
            total += v;
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("training is deterministic in (data, hp, seed)") {
    const auto ds = sign_dataset(200, 4, 77);
    const auto m1 = train_forest(ds.x, ds.y, small_hp(), 1234);
    const auto m2 = train_forest(ds.x, ds.y, small_hp(), 1234);
    CHECK(m1.importances == m2.importances);
    const auto p1 = predict_proba(m1, ds.x);
    const auto p2 = predict_proba(m2, ds.x);
    CHECK(p1 == p2);
    const auto m3 = train_forest(ds.x, ds.y, small_hp(), 1235);
    CHECK(m3.importances != m1.importances);
}

TEST_CASE("permuting feature columns permutes the importances") {
    // With every feature considered at every split (max_features = all) the
    // trees are identical up to feature relabeling, so importances must
    // follow the permutation. Cross-feature gain ties resolve by threshold
    // value, which continuous data keeps distinct.
    ForestHyperparams hp = small_hp(15);
    hp.max_features = MaxFeatures::All;
    for (std::uint64_t seed : {11ULL, 12ULL, 13ULL}) {
        Rng rng(seed);
        const std::size_t n = 150, d = 4;
        Matrix x(n, d);
        std::vector<int> y(n);
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t j = 0; j < d; ++j) x(r, j) = rng.normal();
            y[r] = x(r, 1) + 0.5 * x(r, 3) > 0 ? 1 : 0;
        }
        const std::vector<std::size_t> perm = {2, 0, 3, 1};  // new j <- old perm[j]
        Matrix xp(n, d);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t j = 0; j < d; ++j) xp(r, j) = x(r, perm[j]);

        const auto m = train_forest(x, y, hp, seed);
        const auto mp = train_forest(xp, y, hp, seed);
        for (std::size_t j = 0; j < d; ++j)
            CHECK(mp.importances[j] == doctest::Approx(m.importances[perm[j]]).epsilon(1e-12));
    }
}

TEST_CASE("predict thresholds probabilities with ties going to class 1") {
    ForestModel model;
    model.n_features = 1;
    Tree t0, t1;
    t0.nodes.push_back({});  // leaf, prob1 = 0
    t1.nodes.push_back({});
    t1.nodes[0].prob1 = 1.0;
    model.trees = {t0, t1};
    Matrix x(1, 1);
    const auto probs = predict_proba(model, x);
    CHECK(probs[0] == 0.5);
    CHECK(predict(model, x)[0] == 1);
}

TEST_CASE("predict agrees with thresholding predict_proba everywhere") {
    const auto ds = sign_dataset(250, 3, 15);
    const auto model = train_forest(ds.x, ds.y, small_hp(), 3);
    const auto held = sign_dataset(100, 3, 16);
    const auto probs = predict_proba(model, held.x);
    const auto classes = predict(model, held.x);
    for (std::size_t i = 0; i < probs.size(); ++i)
        CHECK(classes[i] == (probs[i] >= 0.5 ? 1 : 0));
}

TEST_CASE("forest probability is the mean of per-tree leaf frequencies") {
    const auto ds = sign_dataset(200, 3, 21);
    const auto model = train_forest(ds.x, ds.y, small_hp(30), 5);
    const auto held = sign_dataset(50, 3, 22);
    const auto probs = predict_proba(model, held.x);
    for (std::size_t r = 0; r < held.x.rows(); ++r) {
        // Independent traversal of each stored tree.
        double sum = 0.0;
        for (const Tree& tree : model.trees) {
            int node = 0;
            while (!tree.nodes[node].is_leaf()) {
                const auto& nd = tree.nodes[node];
                node = held.x(r, static_cast<std::size_t>(nd.feature)) <= nd.threshold
                           ? nd.left
                           : nd.right;
            }
            sum += tree.nodes[node].prob1;
        }
        CHECK(probs[r] == doctest::Approx(sum / 30.0).epsilon(1e-12));
    }
    // Single-tree forest: the forest probability is that tree's leaf value.
    const auto single = train_forest(ds.x, ds.y, small_hp(1), 5);
    const auto sp = predict_proba(single, held.x);
    for (std::size_t r = 0; r < held.x.rows(); ++r) {
        CHECK(sp[r] == single.trees[0].predict_proba(held.x.row(r)));
    }
}

TEST_CASE("stored-tree MDI matches a reference recomputation on the replayed bootstrap") {
    const auto ds = sign_dataset(120, 3, 33);
    ForestHyperparams hp;
    hp.n_trees = 1;
    hp.max_features = MaxFeatures::All;
    const std::uint64_t seed = 99;
    const auto model = train_forest(ds.x, ds.y, hp, seed);
    const Tree& tree = model.trees[0];

    // Replay the documented draw order: the tree's first n draws are its
    // bootstrap row indices.
    Rng rng(tree_seed(seed, 0));
    const std::size_t n = ds.x.rows();
    std::vector<std::size_t> rows(n);
    for (auto& r : rows) r = rng.index(n);

    // Route the bootstrap sample down the stored structure and recompute the
    // per-feature impurity decreases from scratch.
    std::vector<std::vector<std::size_t>> node_rows(tree.nodes.size());
    node_rows[0] = rows;
    std::vector<double> reference(ds.x.cols(), 0.0);
    auto gini_of = [&](const std::vector<std::size_t>& idx) {
        double c1 = 0;
        for (std::size_t i : idx) c1 += ds.y[i];
        const auto m = static_cast<double>(idx.size());
        const double p1 = c1 / m;
        return 1.0 - p1 * p1 - (1.0 - p1) * (1.0 - p1);
    };
    for (std::size_t nidx = 0; nidx < tree.nodes.size(); ++nidx) {
        const TreeNode& node = tree.nodes[nidx];
        if (node.is_leaf()) continue;
        std::vector<std::size_t> left, right;
        for (std::size_t i : node_rows[nidx]) {
            (ds.x(i, static_cast<std::size_t>(node.feature)) <= node.threshold ? left
                                                                               : right)
                .push_back(i);
        }
        const double decrease =
            static_cast<double>(node_rows[nidx].size()) * gini_of(node_rows[nidx]) -
            static_cast<double>(left.size()) * gini_of(left) -
            static_cast<double>(right.size()) * gini_of(right);
        reference[static_cast<std::size_t>(node.feature)] += decrease;
        node_rows[static_cast<std::size_t>(node.left)] = std::move(left);
        node_rows[static_cast<std::size_t>(node.right)] = std::move(right);
    }
    const double total = std::accumulate(reference.begin(), reference.end(), 0.0);
    REQUIRE(total > 0.0);
    for (std::size_t j = 0; j < reference.size(); ++j)
        CHECK(model.importances[j] ==
              doctest::Approx(reference[j] / total).epsilon(1e-9));
}

TEST_CASE("above-mean selection keeps a minority of features on wide telemetry") {
    // 19 features, 7 of them informative with tapering weights: the selected
    // set should land around 7, as the above-mean rule does on disk SMART
    // telemetry.
    Rng rng(1212);
    const std::size_t n = 1500, d = 19;
    const std::vector<double> weights = {1.0, 0.9, 0.8, 0.7, 0.6, 0.5, 0.4};
    Matrix x(n, d);
    std::vector<int> y(n);
    for (std::size_t r = 0; r < n; ++r) {
        double score = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            x(r, j) = rng.normal();
            if (j < weights.size()) score += weights[j] * x(r, j);
        }
        y[r] = score > 0 ? 1 : 0;
    }
    ForestHyperparams hp;
    const auto model = train_forest(x, y, hp, 77);
    const auto selected = important_features(model).indices;
    CHECK(selected.size() >= 5);
    CHECK(selected.size() <= 9);
    for (std::size_t f : selected) CHECK(f < weights.size());
}

TEST_CASE("important_features keeps strictly-above-mean indices") {
    ForestModel model;
    model.importances = {0.6, 0.3, 0.1};
    const auto set = important_features(model);
    CHECK(set.indices == std::vector<std::size_t>{0});
    CHECK(set.threshold == doctest::Approx(1.0 / 3.0));

    model.importances = {0.25, 0.25, 0.25, 0.25};
    CHECK(important_features(model).indices.empty());

    model.importances = {0.0, 0.0};
    CHECK(important_features(model).indices.empty());
}

TEST_CASE("single-class labels are rejected with a dedicated error") {
    Matrix x(10, 2);
    std::vector<int> y(10, 1);
    CHECK_THROWS_AS(train_forest(x, y, small_hp(), 1), SingleClassError);
}

TEST_CASE("hyperparameter validation and dimension checks") {
    const auto ds = sign_dataset(50, 2, 3);
    ForestHyperparams hp;
    hp.n_trees = 0;
    CHECK_THROWS_AS(train_forest(ds.x, ds.y, hp, 1), UsageError);
    hp = {};
    hp.min_samples_split = 1;
    CHECK_THROWS_AS(train_forest(ds.x, ds.y, hp, 1), UsageError);
    const auto model = train_forest(ds.x, ds.y, small_hp(5), 1);
    Matrix wrong(3, 5);
    CHECK_THROWS_AS(predict_proba(model, wrong), DataError);
}

TEST_CASE("model summary serializes the audit fields") {
    const auto ds = sign_dataset(100, 3, 60);
    ForestHyperparams hp = small_hp(8);
    hp.max_depth = 4;
    const auto model = train_forest(ds.x, ds.y, hp, 321);
    const auto j = model_summary(model);
    CHECK(j["n_features"] == 3);
    CHECK(j["n_trees"] == 8);
    CHECK(j["train_seed"] == 321);
    CHECK(j["importances"].size() == 3);
    CHECK(j["hyperparams"]["max_depth"] == 4);
    CHECK(j["hyperparams"]["max_features"] == "sqrt");
}

TEST_CASE("depth limit and no-bootstrap mode stay functional") {
    const auto ds = sign_dataset(200, 3, 8);
    ForestHyperparams hp = small_hp(10);
    hp.max_depth = 1;
    const auto stump = train_forest(ds.x, ds.y, hp, 2);
    for (const Tree& t : stump.trees) CHECK(t.nodes.size() <= 3);

    hp = small_hp(10);
    hp.bootstrap = false;
    const auto full = train_forest(ds.x, ds.y, hp, 2);
    // Without bootstrap every tree sees the fully separable data.
    const auto preds = predict(full, ds.x);
    CHECK(std::equal(preds.begin(), preds.end(), ds.y.begin()));
}
