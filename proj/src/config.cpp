#include "mcudi/config.hpp"

#include <fstream>
#include <set>

namespace mcudi {

using nlohmann::json;

std::vector<std::uint64_t> default_seeds() {
    return {17, 29, 47, 83, 131, 199, 283, 383, 499, 631};
}

void RunConfig::validate() const {
    hyperparams.validate();
    if (schema) schema->validate();
    if (seeds.empty()) throw UsageError("config: seeds must be non-empty");
    if (!(alpha > 0.0 && alpha < 1.0)) throw UsageError("config: alpha must lie in (0, 1)");
    if (folds < 2) throw UsageError("config: folds must be >= 2");
    if (window < 1) throw UsageError("config: window must be >= 1");
    if (output_dir.empty()) throw UsageError("config: output_dir must be non-empty");
}

const DatasetSchema& RunConfig::require_schema() const {
    if (!schema) throw UsageError("config: this command requires a \"schema\" section");
    return *schema;
}

namespace {

void reject_unknown_keys(const json& j, const std::set<std::string>& known,
                         const std::string& where) {
    for (const auto& [key, value] : j.items())
        if (!known.contains(key))
            throw UsageError("config: unknown key \"" + key + "\" in " + where);
}

json must_load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file: " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw UsageError("config file " + path.string() + " is not valid JSON: " + e.what());
    }
    if (!j.is_object()) throw UsageError("config file must hold a JSON object");
    return j;
}

DatasetSchema schema_from_json(const json& j) {
    reject_unknown_keys(j,
                        {"feature_columns", "label_column", "period_column",
                         "period_granularity", "rows_per_period"},
                        "schema");
    DatasetSchema s;
    try {
        s.feature_columns = j.at("feature_columns").get<std::vector<std::string>>();
        s.label_column = j.value("label_column", std::string{});
        s.period_column = j.value("period_column", std::string{});
        s.granularity = granularity_from_string(j.value("period_granularity", "day"));
        s.rows_per_period = j.value("rows_per_period", std::size_t{0});
    } catch (const json::exception& e) {
        throw UsageError(std::string("config schema: ") + e.what());
    }
    return s;
}

ForestHyperparams hyperparams_from_json(const json& j) {
    reject_unknown_keys(
        j, {"n_trees", "max_depth", "min_samples_split", "max_features", "bootstrap"},
        "hyperparams");
    ForestHyperparams hp;
    try {
        hp.n_trees = j.value("n_trees", hp.n_trees);
        if (j.contains("max_depth") && !j.at("max_depth").is_null())
            hp.max_depth = j.at("max_depth").get<int>();
        hp.min_samples_split = j.value("min_samples_split", hp.min_samples_split);
        const std::string mf = j.value("max_features", "sqrt");
        if (mf == "sqrt") hp.max_features = MaxFeatures::Sqrt;
        else if (mf == "all") hp.max_features = MaxFeatures::All;
        else throw UsageError("config: max_features must be \"sqrt\" or \"all\"");
        hp.bootstrap = j.value("bootstrap", hp.bootstrap);
    } catch (const json::exception& e) {
        throw UsageError(std::string("config hyperparams: ") + e.what());
    }
    return hp;
}

}  // namespace

RunConfig config_from_json(const json& j) {
    reject_unknown_keys(
        j, {"schema", "hyperparams", "seeds", "alpha", "folds", "window", "output_dir"},
        "config");
    RunConfig c;
    try {
        if (j.contains("schema")) c.schema = schema_from_json(j.at("schema"));
        if (j.contains("hyperparams")) c.hyperparams = hyperparams_from_json(j.at("hyperparams"));
        if (j.contains("seeds")) c.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
        c.alpha = j.value("alpha", c.alpha);
        c.folds = j.value("folds", c.folds);
        c.window = j.value("window", c.window);
        c.output_dir = j.value("output_dir", c.output_dir);
    } catch (const json::exception& e) {
        throw UsageError(std::string("config: ") + e.what());
    }
    c.validate();
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    return config_from_json(must_load(path));
}

json effective_config(const RunConfig& c) {
    json j;
    if (c.schema) {
        j["schema"] = {{"feature_columns", c.schema->feature_columns},
                       {"label_column", c.schema->label_column},
                       {"period_column", c.schema->period_column},
                       {"period_granularity", to_string(c.schema->granularity)},
                       {"rows_per_period", c.schema->rows_per_period}};
    }
    j["hyperparams"] = {
        {"n_trees", c.hyperparams.n_trees},
        {"max_depth",
         c.hyperparams.max_depth ? json(*c.hyperparams.max_depth) : json(nullptr)},
        {"min_samples_split", c.hyperparams.min_samples_split},
        {"max_features", c.hyperparams.max_features == MaxFeatures::Sqrt ? "sqrt" : "all"},
        {"bootstrap", c.hyperparams.bootstrap}};
    j["seeds"] = c.seeds;
    j["alpha"] = c.alpha;
    j["folds"] = c.folds;
    j["window"] = c.window;
    j["output_dir"] = c.output_dir;
    return j;
}

SynthSpecFile load_synth_spec(const std::filesystem::path& path) {
    const json j = must_load(path);
    reject_unknown_keys(j,
                        {"n_features", "periods", "rows_per_period", "label_features",
                         "label_weights", "label_threshold", "label_noise", "drifts",
                         "seed"},
                        "synth spec");
    SynthSpecFile out;
    try {
        SynthSpec& s = out.spec;
        s.n_features = j.value("n_features", s.n_features);
        s.periods = j.value("periods", s.periods);
        s.rows_per_period = j.value("rows_per_period", s.rows_per_period);
        s.label_features = j.at("label_features").get<std::vector<std::size_t>>();
        if (j.contains("label_weights"))
            s.label_weights = j.at("label_weights").get<std::vector<double>>();
        s.label_threshold = j.value("label_threshold", s.label_threshold);
        s.label_noise = j.value("label_noise", s.label_noise);
        if (j.contains("drifts")) {
            for (const json& e : j.at("drifts")) {
                reject_unknown_keys(e, {"period", "feature", "magnitude"}, "drift event");
                s.drifts.push_back({e.at("period").get<int>(),
                                    e.at("feature").get<std::size_t>(),
                                    e.at("magnitude").get<double>()});
            }
        }
        out.seed = j.value("seed", std::uint64_t{0});
    } catch (const json::exception& e) {
        throw UsageError(std::string("synth spec: ") + e.what());
    }
    out.spec.validate();
    return out;
}

}  // namespace mcudi
