/// @file synthetic.hpp
/// @brief Seeded synthetic batch streams with injected distribution drift.
///
/// Rows carry latent standard-normal features. Labels follow a fixed linear
/// rule over a designated feature subset, evaluated on the latent values and
/// then flipped with a configured noise probability. Drift events add a
/// persistent mean shift to the *observed* values of a feature from a given
/// period onward. A shift on a label feature therefore breaks the learned
/// feature-to-label mapping (the failure-relevant kind of drift), while a
/// shift on any other feature changes the data distribution without touching
/// model error (distribution churn).
#pragma once

#include <cstdint>
#include <vector>

#include "mcudi/data.hpp"

namespace mcudi {

struct DriftEvent {
    int period = 0;          // first period affected; must be in [1, periods)
    std::size_t feature = 0;
    double magnitude = 0.0;  // mean shift in units of the base sd (= 1)
};

struct SynthSpec {
    std::size_t n_features = 10;
    int periods = 10;
    std::size_t rows_per_period = 500;
    std::vector<std::size_t> label_features;  // non-empty, indices < n_features
    std::vector<double> label_weights;        // empty -> all ones
    double label_threshold = 0.0;
    double label_noise = 0.1;                 // label flip probability
    std::vector<DriftEvent> drifts;

    void validate() const;  // throws UsageError
};

struct SynthResult {
    std::vector<Batch> batches;
    std::vector<int> drift_periods;         // ledger: periods where >= 1 event starts
    std::vector<std::size_t> row_counts;    // ledger: rows emitted per period
};

/// Deterministic for a fixed (spec, seed): repeated calls are bit-identical.
SynthResult generate_synthetic_stream(const SynthSpec& spec, std::uint64_t seed);

}  // namespace mcudi
