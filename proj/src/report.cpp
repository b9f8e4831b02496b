#include "mcudi/report.hpp"

#include <cstdio>
#include <fstream>

namespace mcudi {

using nlohmann::json;

namespace {

json optional_to_json(const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
}

}  // namespace

json to_json(const KsResult& r) {
    return {{"statistic", r.statistic},
            {"p_value", r.p_value},
            {"n_a", r.n_a},
            {"n_b", r.n_b}};
}

json to_json(const DriftVerdict& v) {
    json per_feature = json::object();
    for (const auto& [f, ks] : v.per_feature) per_feature[std::to_string(f)] = to_json(ks);
    return {{"detector", v.detector_name},
            {"alarm", v.alarm},
            {"degenerate", v.degenerate},
            {"examined_features", v.examined_features},
            {"per_feature", per_feature}};
}

json to_json(const GroundTruthLabel& label) {
    json j;
    j["period_id"] = label.period_id;
    j["excluded"] = label.excluded;
    if (label.excluded) {
        j["exclusion_reason"] = label.exclusion_reason;
        return j;
    }
    j["votes"] = label.votes;
    j["drift_votes"] = label.drift_votes;
    j["is_drift"] = label.is_drift;
    j["severity_drift_votes"] = optional_to_json(label.severity_drift_votes);
    j["severity_all_seeds"] = optional_to_json(label.severity_all_seeds);
    j["mean_eps_train"] = label.mean_eps_train;
    j["mean_eps_test"] = label.mean_eps_test;
    return j;
}

json to_json(const DetectionAccuracy& acc) {
    return {{"tn", acc.tn},
            {"fp", acc.fp},
            {"tp", acc.tp},
            {"fn", acc.fn},
            {"specificity", optional_to_json(acc.specificity)},
            {"sensitivity", optional_to_json(acc.sensitivity)},
            {"balanced_accuracy", optional_to_json(acc.balanced_accuracy)}};
}

json to_json(const StrategyRunReport& report) {
    json per_seed = json::array();
    for (const SeedRun& run : report.per_seed) {
        json auc = json::array();
        for (const auto& a : run.period_auc) auc.push_back(optional_to_json(a));
        per_seed.push_back({{"seed", run.seed},
                            {"retrain_count", run.retrain_count},
                            {"label_cost", run.label_cost},
                            {"retrain_periods", run.retrain_periods},
                            {"period_auc", auc},
                            {"skipped_periods", run.skipped_periods},
                            {"skipped_retrains", run.skipped_retrains}});
    }
    return {{"strategy", to_string(report.strategy)},
            {"mean_roc_auc", report.mean_roc_auc},
            {"mean_roc_auc_sample_weighted", report.mean_roc_auc_sample_weighted},
            {"retrain_count", report.retrain_count},
            {"total_periods", report.total_periods},
            {"label_cost", report.label_cost},
            {"window", report.window},
            {"per_seed", per_seed}};
}

json model_summary(const ForestModel& model) {
    return {{"n_features", model.n_features},
            {"n_trees", model.trees.size()},
            {"train_seed", model.train_seed},
            {"importances", model.importances},
            {"hyperparams",
             {{"n_trees", model.hp.n_trees},
              {"max_depth", model.hp.max_depth ? json(*model.hp.max_depth) : json(nullptr)},
              {"min_samples_split", model.hp.min_samples_split},
              {"max_features", model.hp.max_features == MaxFeatures::Sqrt ? "sqrt" : "all"},
              {"bootstrap", model.hp.bootstrap}}}};
}

DetectionAccuracySummary summarize_accuracy(const std::string& detector,
                                            const std::vector<DetectionAccuracy>& per_seed) {
    DetectionAccuracySummary s;
    s.detector = detector;
    if (per_seed.empty()) return s;
    double spec_sum = 0, sens_sum = 0, ba_sum = 0;
    std::size_t spec_n = 0, sens_n = 0, ba_n = 0;
    for (const DetectionAccuracy& acc : per_seed) {
        s.tn += acc.tn;
        s.fp += acc.fp;
        s.tp += acc.tp;
        s.fn += acc.fn;
        if (acc.specificity) { spec_sum += *acc.specificity; ++spec_n; }
        if (acc.sensitivity) { sens_sum += *acc.sensitivity; ++sens_n; }
        if (acc.balanced_accuracy) { ba_sum += *acc.balanced_accuracy; ++ba_n; }
    }
    const auto n = static_cast<double>(per_seed.size());
    s.tn /= n;
    s.fp /= n;
    s.tp /= n;
    s.fn /= n;
    if (spec_n > 0) s.specificity = spec_sum / static_cast<double>(spec_n);
    if (sens_n > 0) s.sensitivity = sens_sum / static_cast<double>(sens_n);
    if (ba_n > 0) s.balanced_accuracy = ba_sum / static_cast<double>(ba_n);
    return s;
}

json to_json(const DetectionAccuracySummary& s) {
    return {{"detector", s.detector},
            {"tn", s.tn},
            {"fp", s.fp},
            {"tp", s.tp},
            {"fn", s.fn},
            {"specificity", optional_to_json(s.specificity)},
            {"sensitivity", optional_to_json(s.sensitivity)},
            {"balanced_accuracy", optional_to_json(s.balanced_accuracy)}};
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    if (!path.parent_path().empty())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write file: " + path.string());
    out << content;
}

void write_jsonl(const std::filesystem::path& path, const std::vector<json>& records) {
    std::string body;
    for (const json& r : records) {
        body += r.dump();
        body += '\n';
    }
    write_text_file(path, body);
}

namespace {

std::string fmt_opt(const std::optional<double>& v) {
    if (!v) return "   n/a";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%6.3f", *v);
    return buf;
}

}  // namespace

std::string format_accuracy_table(const std::vector<DetectionAccuracySummary>& rows) {
    std::string out =
        "detector   bal_acc   spec   sens       tn      fp      tp      fn\n";
    for (const auto& r : rows) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%-9s   %s %s %s  %7.1f %7.1f %7.1f %7.1f\n",
                      r.detector.c_str(), fmt_opt(r.balanced_accuracy).c_str(),
                      fmt_opt(r.specificity).c_str(), fmt_opt(r.sensitivity).c_str(), r.tn,
                      r.fp, r.tp, r.fn);
        out += buf;
    }
    return out;
}

std::string format_strategy_table(const std::vector<StrategyRunReport>& rows) {
    std::string out = "strategy   roc_auc   retrains/total   label_cost\n";
    for (const auto& r : rows) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%-9s   %7.4f   %8.1f/%-5d   %10.1f\n",
                      to_string(r.strategy).c_str(), r.mean_roc_auc, r.retrain_count,
                      r.total_periods, r.label_cost);
        out += buf;
    }
    return out;
}

}  // namespace mcudi
