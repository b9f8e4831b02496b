#include "mcudi/synthetic.hpp"

#include <set>
#include <utility>

#include "mcudi/rng.hpp"

namespace mcudi {

void SynthSpec::validate() const {
    if (n_features == 0) throw UsageError("synth: n_features must be >= 1");
    if (periods < 1) throw UsageError("synth: periods must be >= 1");
    if (rows_per_period < 1) throw UsageError("synth: rows_per_period must be >= 1");
    if (label_features.empty()) throw UsageError("synth: label_features must be non-empty");
    for (std::size_t f : label_features)
        if (f >= n_features) throw UsageError("synth: label feature index out of range");
    if (!label_weights.empty() && label_weights.size() != label_features.size())
        throw UsageError("synth: label_weights must match label_features in length");
    if (label_noise < 0.0 || label_noise >= 1.0)
        throw UsageError("synth: label_noise must lie in [0, 1)");
    for (const DriftEvent& e : drifts) {
        if (e.feature >= n_features)
            throw UsageError("synth: drift feature index out of range");
        if (e.period < 1 || e.period >= periods)
            throw UsageError("synth: drift period out of range");
    }
}

SynthResult generate_synthetic_stream(const SynthSpec& spec, std::uint64_t seed) {
    spec.validate();
    const std::size_t d = spec.n_features;
    std::vector<double> weights = spec.label_weights;
    if (weights.empty()) weights.assign(spec.label_features.size(), 1.0);

    SynthResult out;
    {
        std::set<int> periods;
        for (const DriftEvent& e : spec.drifts) periods.insert(e.period);
        out.drift_periods.assign(periods.begin(), periods.end());
    }

    Rng rng(seed);
    std::vector<double> shift(d, 0.0);
    std::vector<double> latent(d);
    for (int p = 0; p < spec.periods; ++p) {
        for (const DriftEvent& e : spec.drifts)
            if (e.period == p) shift[e.feature] += e.magnitude;

        Batch b;
        b.period_id = p;
        b.features = Matrix(spec.rows_per_period, d);
        b.labels.emplace(spec.rows_per_period);
        for (std::size_t r = 0; r < spec.rows_per_period; ++r) {
            for (std::size_t j = 0; j < d; ++j) latent[j] = rng.normal();
            double score = 0.0;
            for (std::size_t k = 0; k < spec.label_features.size(); ++k)
                score += weights[k] * latent[spec.label_features[k]];
            int y = score > spec.label_threshold ? 1 : 0;
            if (rng.uniform01() < spec.label_noise) y = 1 - y;
            (*b.labels)[r] = y;
            for (std::size_t j = 0; j < d; ++j) b.features(r, j) = latent[j] + shift[j];
        }
        out.row_counts.push_back(b.size());
        out.batches.push_back(std::move(b));
    }
    return out;
}

}  // namespace mcudi
