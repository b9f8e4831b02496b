#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "mcudi/evaluation.hpp"
#include "mcudi/rng.hpp"
#include "mcudi/synthetic.hpp"
#include "test_util.hpp"

using namespace mcudi;

namespace {

GroundTruthLabel truth_label(int period, bool drift) {
    GroundTruthLabel l;
    l.period_id = period;
    l.is_drift = drift;
    return l;
}

std::vector<GroundTruthLabel> mixed_truth(int drifts, int non_drifts) {
    std::vector<GroundTruthLabel> t;
    int period = 1;
    for (int i = 0; i < drifts; ++i) t.push_back(truth_label(period++, true));
    for (int i = 0; i < non_drifts; ++i) t.push_back(truth_label(period++, false));
    return t;
}

std::map<int, bool> constant_alarms(const std::vector<GroundTruthLabel>& truth, bool v) {
    std::map<int, bool> alarms;
    for (const auto& l : truth) alarms[l.period_id] = v;
    return alarms;
}

ForestHyperparams fast_hp() {
    ForestHyperparams hp;
    hp.n_trees = 25;
    return hp;
}

SynthResult quiet_stream(int periods, std::size_t rows, std::uint64_t seed) {
    SynthSpec spec;
    spec.n_features = 5;
    spec.periods = periods;
    spec.rows_per_period = rows;
    spec.label_features = {0, 1};
    spec.label_noise = 0.1;
    return generate_synthetic_stream(spec, seed);
}

}  // namespace

TEST_CASE("always-alarming detector scores specificity 1, sensitivity 0 exactly") {
    const auto truth = mixed_truth(7, 13);
    const auto acc = score_detector(constant_alarms(truth, true), truth);
    CHECK(acc.tn == 7);
    CHECK(acc.fp == 0);
    CHECK(acc.tp == 0);
    CHECK(acc.fn == 13);
    CHECK(*acc.specificity == 1.0);
    CHECK(*acc.sensitivity == 0.0);
    CHECK(*acc.balanced_accuracy == 0.5);
}

TEST_CASE("perfect detector scores 1.0 across the board") {
    const auto truth = mixed_truth(5, 5);
    std::map<int, bool> alarms;
    for (const auto& l : truth) alarms[l.period_id] = l.is_drift;
    const auto acc = score_detector(alarms, truth);
    CHECK(*acc.specificity == 1.0);
    CHECK(*acc.sensitivity == 1.0);
    CHECK(*acc.balanced_accuracy == 1.0);
}

TEST_CASE("specificity 0.69 and sensitivity 0.44 average to 0.565") {
    // 100 drifts with 69 alarmed, 100 non-drifts with 44 quiet.
    auto truth = mixed_truth(100, 100);
    std::map<int, bool> alarms;
    for (int i = 0; i < 100; ++i) alarms[truth[i].period_id] = i < 69;
    for (int i = 100; i < 200; ++i) alarms[truth[i].period_id] = (i - 100) >= 44;
    const auto acc = score_detector(alarms, truth);
    CHECK(*acc.specificity == doctest::Approx(0.69));
    CHECK(*acc.sensitivity == doctest::Approx(0.44));
    CHECK(*acc.balanced_accuracy == doctest::Approx(0.565));
}

TEST_CASE("balanced accuracy is always the mean of the other two") {
    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const auto truth = mixed_truth(1 + static_cast<int>(rng.index(20)),
                                       1 + static_cast<int>(rng.index(20)));
        std::map<int, bool> alarms;
        for (const auto& l : truth) alarms[l.period_id] = rng.uniform01() < 0.5;
        const auto acc = score_detector(alarms, truth);
        REQUIRE(acc.specificity.has_value());
        REQUIRE(acc.sensitivity.has_value());
        CHECK(*acc.balanced_accuracy ==
              doctest::Approx((*acc.specificity + *acc.sensitivity) / 2.0));
        CHECK(acc.tn + acc.fp + acc.tp + acc.fn ==
              static_cast<int>(truth.size()));
    }
}

TEST_CASE("zero-denominator metrics are sentinels, not zeros") {
    const auto truth = mixed_truth(0, 4);
    const auto acc = score_detector(constant_alarms(truth, false), truth);
    CHECK_FALSE(acc.specificity.has_value());
    REQUIRE(acc.sensitivity.has_value());
    CHECK_FALSE(acc.balanced_accuracy.has_value());
}

TEST_CASE("excluded periods are ignored; missing verdicts are an error") {
    auto truth = mixed_truth(2, 2);
    truth.push_back([] {
        GroundTruthLabel l;
        l.period_id = 99;
        l.excluded = true;
        return l;
    }());
    auto alarms = constant_alarms(truth, true);
    alarms.erase(99);  // excluded period needs no verdict
    CHECK(score_detector(alarms, truth).tn == 2);
    alarms.erase(1);
    CHECK_THROWS_AS(score_detector(alarms, truth), DataError);
}

TEST_CASE("static never retrains, periodic retrains every period") {
    const auto stream = quiet_stream(5, 150, 44);
    const std::vector<std::uint64_t> seeds = {17, 29};
    const auto st = run_strategy(stream.batches, Strategy::Static, fast_hp(), seeds);
    CHECK(st.retrain_count == 0.0);
    CHECK(st.label_cost == 0.0);
    CHECK(st.total_periods == 4);
    for (const auto& run : st.per_seed) CHECK(run.retrain_periods.empty());

    const auto pe = run_strategy(stream.batches, Strategy::Periodic, fast_hp(), seeds);
    CHECK(pe.retrain_count == 4.0);
    // Every testing batch gets annotated under periodic retraining.
    CHECK(pe.label_cost == doctest::Approx(4 * 150.0));
    for (const auto& run : pe.per_seed)
        CHECK(run.retrain_periods == std::vector<int>{1, 2, 3, 4});
}

TEST_CASE("run_strategy is deterministic and window-aware") {
    const auto stream = quiet_stream(4, 120, 45);
    const std::vector<std::uint64_t> seeds = {7};
    StrategyOptions opt;
    opt.window = 2;
    const auto r1 = run_strategy(stream.batches, Strategy::Periodic, fast_hp(), seeds, opt);
    const auto r2 = run_strategy(stream.batches, Strategy::Periodic, fast_hp(), seeds, opt);
    REQUIRE(r1.per_seed.size() == 1);
    CHECK(r1.mean_roc_auc == r2.mean_roc_auc);
    CHECK(r1.per_seed[0].period_auc.size() == r2.per_seed[0].period_auc.size());
    for (std::size_t i = 0; i < r1.per_seed[0].period_auc.size(); ++i)
        CHECK(*r1.per_seed[0].period_auc[i] == *r2.per_seed[0].period_auc[i]);
    // Window 2 annotates batches 1..3 exactly once each despite overlap.
    CHECK(r1.per_seed[0].label_cost == 3 * 120);
}

TEST_CASE("on a drift-free stream a static model keeps pace with periodic") {
    SynthSpec spec;
    spec.n_features = 5;
    spec.periods = 5;
    spec.rows_per_period = 500;
    spec.label_features = {0, 1};
    spec.label_noise = 0.1;
    const auto stream = generate_synthetic_stream(spec, 52);
    ForestHyperparams hp;
    hp.n_trees = 50;
    const std::vector<std::uint64_t> seeds = {17, 29};
    const auto st = run_strategy(stream.batches, Strategy::Static, hp, seeds);
    const auto pe = run_strategy(stream.batches, Strategy::Periodic, hp, seeds);
    CHECK(std::fabs(st.mean_roc_auc - pe.mean_roc_auc) <= 0.02);
    // Equal-sized batches make the sample-weighted mean coincide with the
    // equal-period-weight mean.
    CHECK(st.mean_roc_auc_sample_weighted == doctest::Approx(st.mean_roc_auc));
}

TEST_CASE("detector strategies never exceed periodic retrains or cost") {
    SynthSpec spec;
    spec.n_features = 5;
    spec.periods = 6;
    spec.rows_per_period = 200;
    spec.label_features = {0, 1};
    spec.drifts = {{3, 0, 3.0}};
    const auto stream = generate_synthetic_stream(spec, 46);
    const std::vector<std::uint64_t> seeds = {17, 29};
    const auto pe = run_strategy(stream.batches, Strategy::Periodic, fast_hp(), seeds);
    for (Strategy s : {Strategy::Ks, Strategy::Mcudi}) {
        const auto r = run_strategy(stream.batches, s, fast_hp(), seeds);
        CHECK(r.retrain_count <= pe.retrain_count);
        CHECK(r.label_cost <= pe.label_cost);
        CHECK(r.retrain_count <= r.total_periods);
    }
}

TEST_CASE("label-cost pipeline: alarm rate drives the annotation bill") {
    const auto stream = quiet_stream(5, 150, 47);
    const std::vector<std::uint64_t> seeds = {17, 29};

    SUBCASE("a detector that cannot fire annotates nothing") {
        StrategyOptions opt;
        opt.alpha = 1e-12;  // effectively never significant
        const auto report = run_label_cost_pipeline(stream.batches, fast_hp(), seeds, opt);
        CHECK(report.detector_arm.label_cost == 0.0);
        CHECK(report.periodic_arm.label_cost == doctest::Approx(4 * 150.0));
        CHECK(report.savings == doctest::Approx(4 * 150.0));
    }
    SUBCASE("a detector that always fires matches periodic costs") {
        StrategyOptions opt;
        opt.alpha = 1.0 - 1e-12;  // p < alpha essentially always
        const auto report = run_label_cost_pipeline(stream.batches, fast_hp(), seeds, opt);
        CHECK(report.detector_arm.label_cost == report.periodic_arm.label_cost);
        CHECK(report.savings == 0.0);
    }
}

TEST_CASE("label-cost savings equal the sizes of non-flagged batches, per seed") {
    SynthSpec spec;
    spec.n_features = 6;
    spec.periods = 6;
    spec.rows_per_period = 250;
    spec.label_features = {0, 1};
    spec.drifts = {{2, 0, 3.0}, {4, 1, 3.0}};
    const auto stream = generate_synthetic_stream(spec, 48);
    const std::vector<std::uint64_t> seeds = {17, 29, 47};
    const auto report = run_label_cost_pipeline(stream.batches, fast_hp(), seeds);

    for (std::size_t s = 0; s < seeds.size(); ++s) {
        const SeedRun& det = report.detector_arm.per_seed[s];
        const SeedRun& per = report.periodic_arm.per_seed[s];
        const std::set<int> flagged(det.retrain_periods.begin(), det.retrain_periods.end());
        std::size_t unflagged_rows = 0;
        for (std::size_t t = 1; t < stream.batches.size(); ++t)
            if (!flagged.contains(stream.batches[t].period_id))
                unflagged_rows += stream.batches[t].size();
        CHECK(per.label_cost - det.label_cost == unflagged_rows);
    }
    CHECK(report.detector_arm.label_cost <= report.periodic_arm.label_cost);
}

TEST_CASE("strategy preconditions") {
    const auto stream = quiet_stream(2, 60, 49);
    CHECK_THROWS_AS(run_strategy({stream.batches[0]}, Strategy::Static, fast_hp(), {1}),
                    DataError);
    CHECK_THROWS_AS(run_strategy(stream.batches, Strategy::Static, fast_hp(), {}),
                    DataError);
    StrategyOptions opt;
    opt.window = 0;
    CHECK_THROWS_AS(run_strategy(stream.batches, Strategy::Static, fast_hp(), {1}, opt),
                    UsageError);
    CHECK_THROWS_AS(strategy_from_string("madeup"), UsageError);
    CHECK(strategy_from_string("mcudi") == Strategy::Mcudi);
    CHECK(to_string(Strategy::Ks) == "ks");
}
