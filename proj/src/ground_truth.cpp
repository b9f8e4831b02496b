#include "mcudi/ground_truth.hpp"

#include "mcudi/metrics.hpp"
#include "mcudi/stats.hpp"

namespace mcudi {

SeedDecision label_batch_pair(const Batch& train, const Batch& test,
                              const ForestHyperparams& hp, int folds,
                              std::uint64_t seed, double alpha) {
    if (!train.labeled() || !test.labeled())
        throw DataError("label_batch_pair: both batches must be labeled");

    SeedDecision d;
    // A single-class batch on either side ends the assessment: the classifier
    // cannot learn from one, and an error-rate comparison against one says
    // nothing about drift.
    if (!has_both_classes(*train.labels) || !has_both_classes(*test.labels)) {
        d.excluded = true;
        d.exclusion_reason = "single-class period";
        return d;
    }
    try {
        d.eps_train = cross_val_error(train.features, *train.labels, folds, hp, seed);
    } catch (const SingleClassError&) {
        d.excluded = true;
        d.exclusion_reason = "all cross-validation folds single-class";
        return d;
    }
    const ForestModel model = train_forest(train.features, *train.labels, hp, seed);
    d.eps_test = error_rate(predict(model, test.features), *test.labels);

    const ZTestResult zr =
        z_test_two_proportion(d.eps_train, d.eps_test, train.size(), test.size(), alpha);
    d.drift = zr.drift;
    d.z = zr.z;
    d.p_value = zr.p_value;
    d.severity = zr.severity;
    return d;
}

std::vector<GroundTruthLabel> label_all_batches(const std::vector<Batch>& batches,
                                                const ForestHyperparams& hp, int folds,
                                                const std::vector<std::uint64_t>& seeds,
                                                double alpha) {
    if (batches.size() < 2) throw DataError("label_all_batches: need at least 2 batches");
    if (seeds.empty()) throw DataError("label_all_batches: need at least 1 seed");

    std::vector<GroundTruthLabel> out;
    out.reserve(batches.size() - 1);
    for (std::size_t t = 1; t < batches.size(); ++t) {
        GroundTruthLabel label;
        label.period_id = batches[t].period_id;

        double sev_drift_sum = 0.0, sev_all_sum = 0.0;
        std::size_t sev_drift_n = 0, sev_all_n = 0;
        std::size_t included = 0;
        for (std::uint64_t seed : seeds) {
            const SeedDecision d =
                label_batch_pair(batches[t - 1], batches[t], hp, folds, seed, alpha);
            label.votes.push_back(!d.excluded && d.drift);
            label.seed_excluded.push_back(d.excluded);
            if (d.excluded) {
                if (label.exclusion_reason.empty())
                    label.exclusion_reason = d.exclusion_reason;
                continue;
            }
            ++included;
            label.mean_eps_train += d.eps_train;
            label.mean_eps_test += d.eps_test;
            if (d.severity) {
                sev_all_sum += *d.severity;
                ++sev_all_n;
                if (d.drift) {
                    sev_drift_sum += *d.severity;
                    ++sev_drift_n;
                }
            }
        }

        if (included == 0) {
            label.excluded = true;
        } else {
            label.mean_eps_train /= static_cast<double>(included);
            label.mean_eps_test /= static_cast<double>(included);
            label.exclusion_reason.clear();
            for (bool v : label.votes) label.drift_votes += v;
            label.is_drift = strict_majority(static_cast<std::size_t>(label.drift_votes),
                                             seeds.size());
            if (sev_drift_n > 0)
                label.severity_drift_votes = sev_drift_sum / static_cast<double>(sev_drift_n);
            if (sev_all_n > 0)
                label.severity_all_seeds = sev_all_sum / static_cast<double>(sev_all_n);
        }
        out.push_back(std::move(label));
    }
    return out;
}

}  // namespace mcudi
