#include "hrv/config.hpp"

#include <fstream>

#include <json.hpp>

#include "hrv/errors.hpp"

namespace hrv {

namespace {

using nlohmann::json;

} // namespace

void PipelineConfig::validate() const {
    if (segmentation.segment_s <= 0.0 || segmentation.rate_hz <= 0.0)
        throw ConfigError("segment length and resample rate must be positive");
    if (artifacts.min_rr_ms <= 0.0 || artifacts.max_rr_ms <= artifacts.min_rr_ms)
        throw ConfigError("artifact RR bounds must satisfy 0 < min < max");
    if (artifacts.ratio_threshold <= 0.0) throw ConfigError("ratio_threshold must be positive");
    if (artifacts.median_window < 1) throw ConfigError("median_window must be >= 1");
    if (segmentation.max_artifact_fraction < 0.0 || segmentation.max_artifact_fraction > 1.0)
        throw ConfigError("max_artifact_fraction must be in [0, 1]");
    if (bands.lf_lo_hz >= bands.lf_hi_hz || bands.hf_lo_hz >= bands.hf_hi_hz)
        throw ConfigError("band edges must be increasing");
    if (higuchi_k_max < 2) throw ConfigError("higuchi_k_max must be >= 2");
    if (pca.variance_target <= 0.0 || pca.variance_target > 1.0)
        throw ConfigError("pca variance_target must be in (0, 1]");
    if (stepwise.entry_p <= 0.0 || stepwise.entry_p >= 1.0 ||
        stepwise.removal_p <= stepwise.entry_p)
        throw ConfigError("stepwise thresholds need 0 < entry_p < removal_p");
    if (schemes.empty()) throw ConfigError("at least one scheme required");
    for (std::size_t h : experiment.hidden_sizes)
        if (h < 2 || h > 6) throw ConfigError("hidden sizes must be in [2, 6]");
    if (!(experiment.train_fraction > 0.0 && experiment.train_fraction < 1.0))
        throw ConfigError("train_fraction must be in (0, 1)");
    if (experiment.repetitions == 0) throw ConfigError("repetitions must be positive");
}

PipelineConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    json j = json::parse(in, nullptr, true, true);

    PipelineConfig c;
    c.manifest = j.value("manifest", c.manifest);
    c.out_dir = j.value("out_dir", c.out_dir);

    if (j.contains("preprocess")) {
        const json& p = j["preprocess"];
        c.artifacts.min_rr_ms = p.value("min_rr_ms", c.artifacts.min_rr_ms);
        c.artifacts.max_rr_ms = p.value("max_rr_ms", c.artifacts.max_rr_ms);
        c.artifacts.ratio_threshold = p.value("ratio_threshold", c.artifacts.ratio_threshold);
        c.artifacts.median_window = p.value("median_window", c.artifacts.median_window);
        c.segmentation.segment_s = p.value("segment_s", c.segmentation.segment_s);
        c.segmentation.rate_hz = p.value("rate_hz", c.segmentation.rate_hz);
        c.segmentation.max_artifact_fraction =
            p.value("max_artifact_fraction", c.segmentation.max_artifact_fraction);
        c.segmentation.min_beats = p.value("min_beats", c.segmentation.min_beats);
    }
    if (j.contains("features")) {
        const json& f = j["features"];
        c.bands.lf_lo_hz = f.value("lf_lo_hz", c.bands.lf_lo_hz);
        c.bands.lf_hi_hz = f.value("lf_hi_hz", c.bands.lf_hi_hz);
        c.bands.hf_lo_hz = f.value("hf_lo_hz", c.bands.hf_lo_hz);
        c.bands.hf_hi_hz = f.value("hf_hi_hz", c.bands.hf_hi_hz);
        c.beta_fit_lo_hz = f.value("beta_fit_lo_hz", c.beta_fit_lo_hz);
        c.beta_fit_hi_hz = f.value("beta_fit_hi_hz", c.beta_fit_hi_hz);
        c.higuchi_k_max = f.value("higuchi_k_max", c.higuchi_k_max);
        c.nn_threshold_ms = f.value("nn_threshold_ms", c.nn_threshold_ms);
    }
    if (j.contains("schemes")) {
        const json& s = j["schemes"];
        if (s.contains("list")) {
            c.schemes.clear();
            for (const auto& name : s["list"])
                c.schemes.push_back(scheme_kind_from_string(name.get<std::string>()));
        }
        c.pca.variance_target = s.value("pca_variance_target", c.pca.variance_target);
        c.stepwise.entry_p = s.value("stepwise_entry_p", c.stepwise.entry_p);
        c.stepwise.removal_p = s.value("stepwise_removal_p", c.stepwise.removal_p);
        c.experiment.per_split_fit = s.value("per_split_fit", c.experiment.per_split_fit);
    }
    if (j.contains("train")) {
        const json& t = j["train"];
        if (t.contains("hidden_sizes"))
            c.experiment.hidden_sizes = t["hidden_sizes"].get<std::vector<std::size_t>>();
        c.experiment.train.learning_rate =
            t.value("learning_rate", c.experiment.train.learning_rate);
        c.experiment.train.momentum = t.value("momentum", c.experiment.train.momentum);
        c.experiment.train.max_epochs = t.value("max_epochs", c.experiment.train.max_epochs);
        c.experiment.train.target_mse = t.value("target_mse", c.experiment.train.target_mse);
        c.experiment.train.minibatch = t.value("minibatch", c.experiment.train.minibatch);
    }
    if (j.contains("experiment")) {
        const json& e = j["experiment"];
        c.experiment.repetitions = e.value("repetitions", c.experiment.repetitions);
        c.experiment.train_fraction = e.value("train_fraction", c.experiment.train_fraction);
        c.experiment.stratified = e.value("stratified", c.experiment.stratified);
        c.experiment.master_seed = e.value("master_seed", c.experiment.master_seed);
        c.experiment.jobs = e.value("jobs", c.experiment.jobs);
        c.experiment.max_divergent_fraction =
            e.value("max_divergent_fraction", c.experiment.max_divergent_fraction);
    }
    if (j.contains("dump")) {
        c.dump_preprocessed = j["dump"].value("preprocessed", c.dump_preprocessed);
        c.dump_psd = j["dump"].value("psd", c.dump_psd);
    }
    c.validate();
    return c;
}

void save_config(const std::filesystem::path& path, const PipelineConfig& c) {
    json j;
    j["manifest"] = c.manifest;
    j["out_dir"] = c.out_dir;
    j["preprocess"] = {{"min_rr_ms", c.artifacts.min_rr_ms},
                       {"max_rr_ms", c.artifacts.max_rr_ms},
                       {"ratio_threshold", c.artifacts.ratio_threshold},
                       {"median_window", c.artifacts.median_window},
                       {"segment_s", c.segmentation.segment_s},
                       {"rate_hz", c.segmentation.rate_hz},
                       {"max_artifact_fraction", c.segmentation.max_artifact_fraction},
                       {"min_beats", c.segmentation.min_beats}};
    j["features"] = {{"lf_lo_hz", c.bands.lf_lo_hz},
                     {"lf_hi_hz", c.bands.lf_hi_hz},
                     {"hf_lo_hz", c.bands.hf_lo_hz},
                     {"hf_hi_hz", c.bands.hf_hi_hz},
                     {"beta_fit_lo_hz", c.beta_fit_lo_hz},
                     {"beta_fit_hi_hz", c.beta_fit_hi_hz},
                     {"higuchi_k_max", c.higuchi_k_max},
                     {"nn_threshold_ms", c.nn_threshold_ms}};
    std::vector<std::string> scheme_names;
    for (SchemeKind k : c.schemes) scheme_names.emplace_back(to_string(k));
    j["schemes"] = {{"list", scheme_names},
                    {"pca_variance_target", c.pca.variance_target},
                    {"stepwise_entry_p", c.stepwise.entry_p},
                    {"stepwise_removal_p", c.stepwise.removal_p},
                    {"per_split_fit", c.experiment.per_split_fit}};
    j["train"] = {{"hidden_sizes", c.experiment.hidden_sizes},
                  {"learning_rate", c.experiment.train.learning_rate},
                  {"momentum", c.experiment.train.momentum},
                  {"max_epochs", c.experiment.train.max_epochs},
                  {"target_mse", c.experiment.train.target_mse},
                  {"minibatch", c.experiment.train.minibatch}};
    // jobs is a runtime knob, not part of the experiment definition: the
    // report is identical for any worker count, so it stays out of the file.
    j["experiment"] = {{"repetitions", c.experiment.repetitions},
                       {"train_fraction", c.experiment.train_fraction},
                       {"stratified", c.experiment.stratified},
                       {"master_seed", c.experiment.master_seed},
                       {"max_divergent_fraction", c.experiment.max_divergent_fraction}};
    j["dump"] = {{"preprocessed", c.dump_preprocessed}, {"psd", c.dump_psd}};

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

} // namespace hrv
