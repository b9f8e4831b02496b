#include "mcudi/evaluation.hpp"

#include <algorithm>
#include <deque>

#include "mcudi/detectors.hpp"
#include "mcudi/metrics.hpp"
#include "mcudi/rng.hpp"

namespace mcudi {

std::string to_string(Strategy s) {
    switch (s) {
        case Strategy::Static: return "static";
        case Strategy::Periodic: return "periodic";
        case Strategy::Ks: return "ks";
        case Strategy::Mcudi: return "mcudi";
    }
    return "static";
}

Strategy strategy_from_string(const std::string& s) {
    if (s == "static") return Strategy::Static;
    if (s == "periodic") return Strategy::Periodic;
    if (s == "ks") return Strategy::Ks;
    if (s == "mcudi") return Strategy::Mcudi;
    throw UsageError("unknown detector/strategy: " + s);
}

DetectionAccuracy score_detector(const std::map<int, bool>& alarms,
                                 const std::vector<GroundTruthLabel>& truth) {
    DetectionAccuracy acc;
    for (const GroundTruthLabel& label : truth) {
        if (label.excluded) continue;
        const auto it = alarms.find(label.period_id);
        if (it == alarms.end())
            throw DataError("score_detector: no verdict for period " +
                            std::to_string(label.period_id));
        const bool alarm = it->second;
        if (label.is_drift) {
            alarm ? ++acc.tn : ++acc.fp;
        } else {
            alarm ? ++acc.fn : ++acc.tp;
        }
    }
    if (acc.tn + acc.fp > 0)
        acc.specificity = static_cast<double>(acc.tn) / (acc.tn + acc.fp);
    if (acc.tp + acc.fn > 0)
        acc.sensitivity = static_cast<double>(acc.tp) / (acc.tp + acc.fn);
    if (acc.specificity && acc.sensitivity)
        acc.balanced_accuracy = (*acc.specificity + *acc.sensitivity) / 2.0;
    return acc;
}

namespace {

bool consult_strategy(Strategy strategy, const ForestModel& model, const Batch& window,
                      const Batch& incoming, double alpha) {
    switch (strategy) {
        case Strategy::Static: return false;
        case Strategy::Periodic: return true;
        case Strategy::Ks: return detect_ks_all(window, incoming, alpha).alarm;
        case Strategy::Mcudi: return detect_mcudi(model, window, incoming, alpha).alarm;
    }
    return false;
}

SeedRun run_one_seed(const std::vector<Batch>& batches, Strategy strategy,
                     const ForestHyperparams& hp, std::uint64_t seed,
                     const StrategyOptions& opt) {
    SeedRun run;
    run.seed = seed;

    std::deque<std::size_t> window = {0};  // batch indices the model was trained on
    auto window_batch = [&] {
        std::vector<Batch> parts;
        parts.reserve(window.size());
        for (std::size_t i : window) parts.push_back(batches[i]);
        return concat_batches(parts);
    };

    Batch train = window_batch();
    if (!has_both_classes(*train.labels))
        throw SingleClassError("run_strategy: initial training period is single-class");
    ForestModel model = train_forest(train.features, *train.labels, hp, mix_seed(seed, 0));

    std::vector<bool> annotated(batches.size(), false);
    for (std::size_t t = 1; t < batches.size(); ++t) {
        const Batch& incoming = batches[t];
        try {
            run.period_auc.push_back(
                roc_auc(predict_proba(model, incoming.features), *incoming.labels));
        } catch (const UndefinedMetricError&) {
            run.period_auc.push_back(std::nullopt);
            ++run.skipped_periods;
        }

        if (!consult_strategy(strategy, model, train, incoming, opt.alpha)) continue;

        std::deque<std::size_t> next_window;
        if (opt.retrain_on_flagged_only) {
            next_window = {t};
        } else {
            const std::size_t lo =
                t + 1 >= static_cast<std::size_t>(opt.window) ? t + 1 - opt.window : 0;
            for (std::size_t i = lo; i <= t; ++i) next_window.push_back(i);
        }
        std::vector<Batch> parts;
        parts.reserve(next_window.size());
        for (std::size_t i : next_window) parts.push_back(batches[i]);
        Batch next_train = concat_batches(parts);
        if (!has_both_classes(*next_train.labels)) {
            // Cannot retrain on a single-class window; keep the current model.
            ++run.skipped_retrains;
            continue;
        }
        window = std::move(next_window);
        train = std::move(next_train);
        ++run.retrain_count;
        run.retrain_periods.push_back(incoming.period_id);
        for (std::size_t i : window) {
            if (i == 0 || annotated[i]) continue;  // the first batch is pre-annotated
            annotated[i] = true;
            run.label_cost += batches[i].size();
        }
        model =
            train_forest(train.features, *train.labels, hp,
                         mix_seed(seed, static_cast<std::uint64_t>(run.retrain_count)));
    }
    return run;
}

}  // namespace

StrategyRunReport run_strategy(const std::vector<Batch>& batches, Strategy strategy,
                               const ForestHyperparams& hp,
                               const std::vector<std::uint64_t>& seeds,
                               const StrategyOptions& options) {
    if (batches.size() < 2) throw DataError("run_strategy: need at least 2 batches");
    if (seeds.empty()) throw DataError("run_strategy: need at least 1 seed");
    if (options.window < 1) throw UsageError("run_strategy: window must be >= 1");
    for (const Batch& b : batches)
        if (!b.labeled()) throw DataError("run_strategy: batches must be labeled");

    StrategyRunReport report;
    report.strategy = strategy;
    report.total_periods = static_cast<int>(batches.size()) - 1;
    report.window = options.window;

    double auc_sum = 0.0, auc_weighted_sum = 0.0;
    double weight_sum = 0.0;
    std::size_t auc_n = 0;
    for (std::uint64_t seed : seeds) {
        SeedRun run = run_one_seed(batches, strategy, hp, seed, options);
        report.retrain_count += run.retrain_count;
        report.label_cost += static_cast<double>(run.label_cost);
        for (std::size_t i = 0; i < run.period_auc.size(); ++i) {
            if (!run.period_auc[i]) continue;
            const double auc = *run.period_auc[i];
            const auto w = static_cast<double>(batches[i + 1].size());
            auc_sum += auc;
            auc_weighted_sum += auc * w;
            weight_sum += w;
            ++auc_n;
        }
        report.per_seed.push_back(std::move(run));
    }
    const auto n_seeds = static_cast<double>(seeds.size());
    report.retrain_count /= n_seeds;
    report.label_cost /= n_seeds;
    if (auc_n > 0) report.mean_roc_auc = auc_sum / static_cast<double>(auc_n);
    if (weight_sum > 0) report.mean_roc_auc_sample_weighted = auc_weighted_sum / weight_sum;
    return report;
}

LabelCostReport run_label_cost_pipeline(const std::vector<Batch>& batches,
                                        const ForestHyperparams& hp,
                                        const std::vector<std::uint64_t>& seeds,
                                        const StrategyOptions& options) {
    StrategyOptions detector_opt = options;
    detector_opt.retrain_on_flagged_only = true;

    LabelCostReport report;
    report.detector_arm = run_strategy(batches, Strategy::Mcudi, hp, seeds, detector_opt);
    report.periodic_arm = run_strategy(batches, Strategy::Periodic, hp, seeds, options);
    report.savings = report.periodic_arm.label_cost - report.detector_arm.label_cost;
    return report;
}

}  // namespace mcudi
