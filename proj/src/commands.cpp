#include "mcudi/commands.hpp"

#include <algorithm>
#include <cstdio>

#include "mcudi/detectors.hpp"
#include "mcudi/report.hpp"

namespace mcudi {

using nlohmann::json;

namespace {

struct LoadedData {
    std::vector<Batch> batches;  // already scaled with the first period's statistics
    IngestionReport report;
};

LoadedData load_and_scale(const RunConfig& config, const std::filesystem::path& csv) {
    const DatasetSchema& schema = config.require_schema();
    if (schema.label_column.empty())
        throw UsageError("this command requires schema.label_column");
    LoadResult loaded = load_csv(csv, schema);
    if (loaded.batches.size() < 2)
        throw DataError("need at least 2 periods, got " +
                        std::to_string(loaded.batches.size()));
    LoadedData out;
    out.batches = scale_with_first_period(loaded.batches);
    out.report = std::move(loaded.report);
    return out;
}

json ingestion_to_json(const IngestionReport& r) {
    return {{"rows_read", r.rows_read},
            {"rows_dropped", r.rows_dropped},
            {"period_keys", r.period_keys},
            {"omitted_periods", r.omitted_periods}};
}

void write_config_echo(const RunConfig& config) {
    write_text_file(std::filesystem::path(config.output_dir) / "effective_config.json",
                    effective_config(config).dump(2) + "\n");
}

/// Consecutive-pair alarms for one detector under one seed; the model-centric
/// detector trains its reference model on the earlier batch of each pair.
std::map<int, bool> pairwise_alarms(const std::string& detector,
                                    const std::vector<Batch>& batches,
                                    const RunConfig& config, std::uint64_t seed,
                                    std::vector<json>* verdict_records) {
    std::map<int, bool> alarms;
    for (std::size_t t = 1; t < batches.size(); ++t) {
        const Batch& train = batches[t - 1];
        const Batch& test = batches[t];
        DriftVerdict v;
        if (detector == "static") {
            v = detect_static(train, test);
        } else if (detector == "periodic") {
            v = detect_periodic(train, test);
        } else if (detector == "ks") {
            v = detect_ks_all(train, test, config.alpha);
        } else if (detector == "mcudi") {
            if (!train.labeled() || !has_both_classes(*train.labels)) {
                // No reference model can exist; fall back to the all-feature test.
                v = detect_ks_all(train, test, config.alpha);
                v.detector_name = "mcudi";
                v.degenerate = true;
            } else {
                const ForestModel model =
                    train_forest(train.features, *train.labels, config.hyperparams, seed);
                v = detect_mcudi(model, train, test, config.alpha);
            }
        } else {
            throw UsageError("unknown detector: " + detector);
        }
        alarms[test.period_id] = v.alarm;
        if (verdict_records) {
            json rec = to_json(v);
            rec["period_id"] = test.period_id;
            rec["train_period_id"] = train.period_id;
            rec["seed"] = seed;
            verdict_records->push_back(std::move(rec));
        }
    }
    return alarms;
}

}  // namespace

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const UsageError*>(&e)) return kExitUsage;
    if (dynamic_cast<const SchemaError*>(&e)) return kExitSchema;
    return kExitData;
}

void cmd_ground_truth(const RunConfig& config, const std::filesystem::path& csv) {
    config.validate();
    const LoadedData data = load_and_scale(config, csv);
    const auto truth = label_all_batches(data.batches, config.hyperparams, config.folds,
                                         config.seeds, config.alpha);

    const std::filesystem::path dir(config.output_dir);
    std::vector<json> records, severity_series;
    std::string summary = "period  status     drift_votes  severity\n";
    for (const GroundTruthLabel& label : truth) {
        records.push_back(to_json(label));
        char line[128];
        if (label.excluded) {
            std::snprintf(line, sizeof line, "%6d  excluded   (%s)\n", label.period_id,
                          label.exclusion_reason.c_str());
        } else {
            const double sev = label.severity_drift_votes.value_or(
                label.severity_all_seeds.value_or(0.0));
            std::snprintf(line, sizeof line, "%6d  %-9s  %6d/%-3zu  %8.4f\n",
                          label.period_id, label.is_drift ? "drift" : "non-drift",
                          label.drift_votes, config.seeds.size(), sev);
            severity_series.push_back({{"period_id", label.period_id},
                                       {"is_drift", label.is_drift},
                                       {"severity", label.severity_drift_votes.has_value()
                                                        ? json(*label.severity_drift_votes)
                                                        : json(nullptr)}});
        }
        summary += line;
    }
    write_jsonl(dir / "ground_truth.jsonl", records);
    write_jsonl(dir / "severity_series.jsonl", severity_series);
    write_text_file(dir / "ingestion.json", ingestion_to_json(data.report).dump(2) + "\n");
    write_text_file(dir / "summary.txt", summary);
    write_config_echo(config);
}

void cmd_evaluate(const RunConfig& config, const std::filesystem::path& csv,
                  std::vector<std::string> detectors) {
    config.validate();
    // Static and periodic are always reported as the lower/upper baselines.
    for (const char* baseline : {"periodic", "static"})
        if (std::find(detectors.begin(), detectors.end(), baseline) == detectors.end())
            detectors.insert(detectors.begin(), baseline);
    for (const std::string& name : detectors)
        strategy_from_string(name);  // rejects unknown names up front

    const LoadedData data = load_and_scale(config, csv);
    const auto truth = label_all_batches(data.batches, config.hyperparams, config.folds,
                                         config.seeds, config.alpha);

    const std::filesystem::path dir(config.output_dir);
    std::vector<json> accuracy_records, strategy_records, verdict_records;
    std::vector<DetectionAccuracySummary> accuracy_rows;
    std::vector<StrategyRunReport> strategy_rows;
    for (const std::string& name : detectors) {
        // Only the model-centric detector depends on the training seed.
        const bool seed_dependent = name == "mcudi";
        std::vector<DetectionAccuracy> per_seed;
        if (seed_dependent) {
            for (std::uint64_t seed : config.seeds) {
                const auto alarms =
                    pairwise_alarms(name, data.batches, config, seed, &verdict_records);
                per_seed.push_back(score_detector(alarms, truth));
            }
        } else {
            const auto alarms = pairwise_alarms(name, data.batches, config,
                                                config.seeds.front(), &verdict_records);
            per_seed.push_back(score_detector(alarms, truth));
        }
        const auto summary = summarize_accuracy(name, per_seed);
        accuracy_rows.push_back(summary);
        accuracy_records.push_back(to_json(summary));

        StrategyOptions opt;
        opt.window = config.window;
        opt.alpha = config.alpha;
        const auto run = run_strategy(data.batches, strategy_from_string(name),
                                      config.hyperparams, config.seeds, opt);
        strategy_rows.push_back(run);
        strategy_records.push_back(to_json(run));
    }

    // Per-period feature-change series (the count-of-changing-features
    // monitor), plot-ready alongside the ground-truth labels.
    std::vector<json> change_records;
    for (std::size_t t = 1; t < data.batches.size(); ++t) {
        const auto change =
            count_changed_features(data.batches[t - 1], data.batches[t], config.alpha);
        change_records.push_back({{"period_id", data.batches[t].period_id},
                                  {"changed_count", change.changed_count},
                                  {"changed_fraction", change.changed_fraction},
                                  {"changed_indices", change.changed_indices}});
    }

    write_jsonl(dir / "detection_accuracy.jsonl", accuracy_records);
    write_jsonl(dir / "strategy_runs.jsonl", strategy_records);
    write_jsonl(dir / "verdicts.jsonl", verdict_records);
    write_jsonl(dir / "feature_change.jsonl", change_records);
    write_text_file(dir / "ingestion.json", ingestion_to_json(data.report).dump(2) + "\n");
    write_text_file(dir / "summary.txt", format_accuracy_table(accuracy_rows) + "\n" +
                                             format_strategy_table(strategy_rows));
    write_config_echo(config);
}

void cmd_label_cost(const RunConfig& config, const std::filesystem::path& csv) {
    config.validate();
    const LoadedData data = load_and_scale(config, csv);

    StrategyOptions opt;
    opt.window = config.window;
    opt.alpha = config.alpha;
    const LabelCostReport report =
        run_label_cost_pipeline(data.batches, config.hyperparams, config.seeds, opt);

    const std::filesystem::path dir(config.output_dir);
    write_jsonl(dir / "label_cost.jsonl",
                {json{{"arm", "mcudi"},
                      {"mean_roc_auc", report.detector_arm.mean_roc_auc},
                      {"label_cost", report.detector_arm.label_cost},
                      {"retrain_count", report.detector_arm.retrain_count},
                      {"detail", to_json(report.detector_arm)}},
                 json{{"arm", "periodic"},
                      {"mean_roc_auc", report.periodic_arm.mean_roc_auc},
                      {"label_cost", report.periodic_arm.label_cost},
                      {"retrain_count", report.periodic_arm.retrain_count},
                      {"detail", to_json(report.periodic_arm)}},
                 json{{"savings", report.savings}}});

    write_text_file(dir / "ingestion.json", ingestion_to_json(data.report).dump(2) + "\n");
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "arm       roc_auc   label_cost\nmcudi     %7.4f   %10.1f\n"
                  "periodic  %7.4f   %10.1f\nsavings   %10.1f samples\n",
                  report.detector_arm.mean_roc_auc, report.detector_arm.label_cost,
                  report.periodic_arm.mean_roc_auc, report.periodic_arm.label_cost,
                  report.savings);
    write_text_file(dir / "summary.txt", buf);
    write_config_echo(config);
}

void cmd_synth(const std::filesystem::path& spec_path,
               const std::filesystem::path& out_csv) {
    const SynthSpecFile spec_file = load_synth_spec(spec_path);
    const SynthResult result = generate_synthetic_stream(spec_file.spec, spec_file.seed);

    const std::size_t d = spec_file.spec.n_features;
    std::string csv;
    for (std::size_t j = 0; j < d; ++j) csv += "f" + std::to_string(j) + ",";
    csv += "label,date,period\n";

    // Period p is stamped with 2024-01-01 + p days so day-granularity
    // ingestion reproduces the generated batches.
    const std::int64_t day0 = days_from_civil(2024, 1, 1);
    for (const Batch& b : result.batches) {
        int y;
        unsigned m, dd;
        civil_from_days(day0 + b.period_id, y, m, dd);
        char date[32];
        std::snprintf(date, sizeof date, "%04d-%02u-%02u", y, m, dd);
        for (std::size_t r = 0; r < b.size(); ++r) {
            char cell[40];
            for (std::size_t j = 0; j < d; ++j) {
                std::snprintf(cell, sizeof cell, "%.17g,", b.features(r, j));
                csv += cell;
            }
            csv += std::to_string((*b.labels)[r]);
            csv += ',';
            csv += date;
            csv += ',';
            csv += std::to_string(b.period_id);
            csv += '\n';
        }
    }
    write_text_file(out_csv, csv);

    json ledger = {{"seed", spec_file.seed},
                   {"n_features", d},
                   {"periods", spec_file.spec.periods},
                   {"rows_per_period", result.row_counts},
                   {"label_features", spec_file.spec.label_features},
                   {"drift_periods", result.drift_periods},
                   {"drifts", json::array()}};
    for (const DriftEvent& e : spec_file.spec.drifts)
        ledger["drifts"].push_back(
            {{"period", e.period}, {"feature", e.feature}, {"magnitude", e.magnitude}});
    write_text_file(out_csv.string() + ".ledger.json", ledger.dump(2) + "\n");
}

}  // namespace mcudi
