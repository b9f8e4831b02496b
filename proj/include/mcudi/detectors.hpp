/// @file detectors.hpp
/// @brief Degradation indicators behind one common verdict type: static
///        (never alarms), periodic (always alarms), per-feature KS over all
///        features, and the model-centric variant over important features.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "mcudi/data.hpp"
#include "mcudi/forest.hpp"
#include "mcudi/stats.hpp"

namespace mcudi {

struct DriftVerdict {
    bool alarm = false;
    std::map<std::size_t, KsResult> per_feature;   // one entry per examined feature
    std::vector<std::size_t> examined_features;    // ascending
    std::string detector_name;
    bool degenerate = false;  // mcudi fell back to all features (uniform importances)
};

/// Never alarms; examines nothing.
DriftVerdict detect_static(const Batch& train, const Batch& test);

/// Always alarms; examines nothing.
DriftVerdict detect_periodic(const Batch& train, const Batch& test);

/// Per-feature KS on every feature; alarms iff any feature's p < alpha.
/// No multiplicity correction is applied.
DriftVerdict detect_ks_all(const Batch& train, const Batch& test, double alpha = 0.05);

/// Per-feature KS restricted to the model's above-mean-importance features.
/// An empty important set (uniform importances) falls back to all features
/// and marks the verdict degenerate rather than silently monitoring nothing.
DriftVerdict detect_mcudi(const ForestModel& model, const Batch& train,
                          const Batch& test, double alpha = 0.05);

struct FeatureChangeReport {
    std::size_t changed_count = 0;
    double changed_fraction = 0.0;
    std::vector<std::size_t> changed_indices;  // ascending
};

/// Counts features whose train/test KS test rejects at alpha.
FeatureChangeReport count_changed_features(const Batch& train, const Batch& test,
                                           double alpha = 0.05);

}  // namespace mcudi
