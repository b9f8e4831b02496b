#include "mcudi/detectors.hpp"

#include <numeric>

namespace mcudi {

namespace {

void check_dims(const Batch& train, const Batch& test) {
    if (train.dim() != test.dim())
        throw DataError("detector: train/test dimension mismatch");
    if (train.dim() == 0) throw DataError("detector: zero-dimensional batches");
}

DriftVerdict ks_over_features(const Batch& train, const Batch& test,
                              std::vector<std::size_t> features, double alpha,
                              std::string name) {
    DriftVerdict v;
    v.detector_name = std::move(name);
    v.examined_features = std::move(features);
    for (std::size_t f : v.examined_features) {
        const auto a = train.features.column(f);
        const auto b = test.features.column(f);
        const KsResult r = ks_two_sample(a, b);
        if (r.p_value < alpha) v.alarm = true;
        v.per_feature.emplace(f, r);
    }
    return v;
}

std::vector<std::size_t> all_features(std::size_t d) {
    std::vector<std::size_t> out(d);
    std::iota(out.begin(), out.end(), std::size_t{0});
    return out;
}

}  // namespace

DriftVerdict detect_static(const Batch&, const Batch&) {
    DriftVerdict v;
    v.detector_name = "static";
    v.alarm = false;
    return v;
}

DriftVerdict detect_periodic(const Batch&, const Batch&) {
    DriftVerdict v;
    v.detector_name = "periodic";
    v.alarm = true;
    return v;
}

DriftVerdict detect_ks_all(const Batch& train, const Batch& test, double alpha) {
    check_dims(train, test);
    return ks_over_features(train, test, all_features(train.dim()), alpha, "ks");
}

DriftVerdict detect_mcudi(const ForestModel& model, const Batch& train,
                          const Batch& test, double alpha) {
    check_dims(train, test);
    if (model.n_features != train.dim())
        throw DataError("detect_mcudi: model/batch dimension mismatch");
    auto important = important_features(model).indices;
    const bool degenerate = important.empty();
    if (degenerate) important = all_features(train.dim());
    DriftVerdict v = ks_over_features(train, test, std::move(important), alpha, "mcudi");
    v.degenerate = degenerate;
    return v;
}

FeatureChangeReport count_changed_features(const Batch& train, const Batch& test,
                                           double alpha) {
    check_dims(train, test);
    const DriftVerdict v =
        ks_over_features(train, test, all_features(train.dim()), alpha, "ks");
    FeatureChangeReport r;
    for (const auto& [f, ks] : v.per_feature)
        if (ks.p_value < alpha) r.changed_indices.push_back(f);
    r.changed_count = r.changed_indices.size();
    r.changed_fraction =
        static_cast<double>(r.changed_count) / static_cast<double>(train.dim());
    return r;
}

}  // namespace mcudi
