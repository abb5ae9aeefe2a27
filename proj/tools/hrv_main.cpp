// hrv: heart-rate-variability feature extraction and ANN classification.
//
// Subcommands mirror the pipeline stages: `synth` writes a synthetic
// cohort, `features` turns a cohort into a per-subject feature table,
// `experiment` runs the repeated-split ANN evaluation, `report`
// re-summarizes an existing repetitions file, and `predict` scores a
// single recording with a saved model.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hrv/config.hpp"
#include "hrv/errors.hpp"
#include "hrv/evaluation.hpp"
#include "hrv/ingest.hpp"
#include "hrv/pipeline.hpp"
#include "hrv/report.hpp"
#include "hrv/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> jobs;
    std::optional<std::size_t> reps;
    std::vector<std::string> scheme_names;
    std::vector<std::size_t> hidden;
    std::string out_dir;
    std::string manifest;
};

void add_common_flags(CLI::App* cmd, CommonOptions& opt, bool with_experiment_flags) {
    cmd->add_option("--config", opt.config_path, "Pipeline config file (JSON)");
    cmd->add_option("--out", opt.out_dir, "Output directory");
    cmd->add_option("--manifest", opt.manifest, "Cohort manifest CSV");
    cmd->add_option("--jobs", opt.jobs, "Worker thread count (0 = all cores)");
    if (with_experiment_flags) {
        cmd->add_option("--seed", opt.seed, "Master seed");
        cmd->add_option("--reps", opt.reps, "Repetitions per configuration");
        cmd->add_option("--scheme", opt.scheme_names, "Input scheme (pca|stepwise|all), repeatable")
            ->expected(-1);
        cmd->add_option("--hidden", opt.hidden, "Hidden layer sizes, e.g. --hidden 2 3 4")
            ->expected(-1);
    }
}

hrv::PipelineConfig resolve_config(const CommonOptions& opt) {
    hrv::PipelineConfig cfg;
    if (!opt.config_path.empty()) cfg = hrv::load_config(opt.config_path);
    if (!opt.manifest.empty()) cfg.manifest = opt.manifest;
    if (!opt.out_dir.empty()) cfg.out_dir = opt.out_dir;
    if (opt.seed) cfg.experiment.master_seed = *opt.seed;
    if (opt.jobs) cfg.experiment.jobs = *opt.jobs;
    if (opt.reps) cfg.experiment.repetitions = *opt.reps;
    if (!opt.hidden.empty()) cfg.experiment.hidden_sizes = opt.hidden;
    if (!opt.scheme_names.empty()) {
        cfg.schemes.clear();
        for (const std::string& name : opt.scheme_names)
            cfg.schemes.push_back(hrv::scheme_kind_from_string(name));
    }
    cfg.validate();
    return cfg;
}

hrv::FeatureMatrix obtain_features(const hrv::PipelineConfig& cfg, const std::string& features_csv,
                                   const fs::path& out_dir) {
    if (!features_csv.empty()) return hrv::load_features_csv(features_csv);
    if (cfg.manifest.empty())
        throw hrv::ConfigError("either --manifest/--config manifest or --features is required");
    const hrv::Cohort cohort = hrv::load_cohort(cfg.manifest);
    hrv::FeatureExtraction extraction =
        hrv::extract_features(cohort, cfg, cfg.experiment.jobs);
    hrv::write_features_csv(out_dir / "features.csv", extraction.matrix);
    hrv::write_rejects_csv(out_dir / "rejects.csv", extraction.outcomes);
    if (extraction.matrix.n_subjects() == 0)
        throw hrv::Error("every subject was rejected; see rejects.csv");
    return std::move(extraction.matrix);
}

int cmd_synth(const CommonOptions& opt, const std::string& spec_path) {
    hrv::CohortSpec spec;
    if (!spec_path.empty()) spec = hrv::load_cohort_spec(spec_path);
    if (opt.seed) spec.master_seed = *opt.seed;
    const fs::path out_dir = opt.out_dir.empty() ? fs::path("synth_cohort") : fs::path(opt.out_dir);
    fs::create_directories(out_dir);

    const hrv::SynthCohort synth = hrv::gen_cohort(spec);
    const fs::path manifest = hrv::write_cohort(out_dir, synth);
    hrv::save_cohort_spec(out_dir / "cohort_spec.json", spec);

    std::cout << "wrote " << synth.cohort.subjects.size() << " subjects ("
              << synth.cohort.count(hrv::ClassLabel::normal) << " NORMAL, "
              << synth.cohort.count(hrv::ClassLabel::ihd) << " IHD) under " << out_dir.string()
              << "\nmanifest: " << manifest.string() << '\n';
    return 0;
}

int cmd_features(const CommonOptions& opt) {
    hrv::PipelineConfig cfg = resolve_config(opt);
    if (cfg.manifest.empty()) throw hrv::ConfigError("a manifest is required (--manifest)");
    const fs::path out_dir(cfg.out_dir);
    fs::create_directories(out_dir);

    const hrv::Cohort cohort = hrv::load_cohort(cfg.manifest);
    hrv::FeatureExtraction extraction = hrv::extract_features(cohort, cfg, cfg.experiment.jobs);
    hrv::write_features_csv(out_dir / "features.csv", extraction.matrix);
    hrv::write_rejects_csv(out_dir / "rejects.csv", extraction.outcomes);
    hrv::save_config(out_dir / "effective_config.json", cfg);

    const auto rejects = extraction.rejects();
    std::cout << "features: " << extraction.matrix.n_subjects() << " subjects, "
              << rejects.size() << " rejected ("
              << (out_dir / "features.csv").string() << ")\n";
    if (extraction.matrix.n_subjects() == 0) {
        std::cerr << "error: every subject was rejected\n";
        return 1;
    }
    return 0;
}

void write_experiment_outputs(const fs::path& out_dir, const hrv::RunReport& report,
                              const hrv::PipelineConfig& cfg) {
    hrv::write_repetitions_csv(out_dir / "repetitions.csv", report);
    const hrv::Summary summary = hrv::summarize(report);
    hrv::write_summary_csv(out_dir / "summary.csv", summary);
    hrv::write_summary_table(out_dir / "summary_table.txt", summary, report);
    hrv::write_histograms_csv(out_dir / "histograms.csv", report);

    json selected;
    selected["format_version"] = 1;
    json per_scheme = json::array();
    const hrv::SchemeRun* overall = nullptr;
    for (const hrv::SchemeRun& run : report.schemes) {
        hrv::save_scheme(out_dir / ("scheme_" + run.name + ".json"),
                         run.best_scheme ? *run.best_scheme : run.scheme);
        if (!run.has_best) continue;
        const hrv::RepetitionResult& best = hrv::best_repetition(run);

        hrv::write_roc_csv(out_dir / ("roc_best_" + run.name + ".csv"),
                           hrv::roc(best.test_scores, best.test_labels));

        hrv::ModelBundle bundle;
        bundle.scheme = run.best_scheme ? *run.best_scheme : run.scheme;
        bundle.input_stats = best.input_stats;
        bundle.net = best.net;
        bundle.scheme_name = run.name;
        bundle.hidden = best.hidden;
        bundle.seed = best.seed;
        hrv::save_model(out_dir / ("model_best_" + run.name + ".json"), bundle);

        json entry;
        entry["scheme"] = run.name;
        entry["hidden"] = best.hidden;
        entry["rep"] = best.rep;
        entry["seed"] = best.seed;
        entry["acc"] = best.metrics.acc.value_or(0.0);
        entry["auc"] = 100.0 * best.auc;
        entry["model_file"] = "model_best_" + run.name + ".json";
        per_scheme.push_back(std::move(entry));

        if (!overall ||
            best.metrics.acc.value_or(-1.0) >
                hrv::best_repetition(*overall).metrics.acc.value_or(-1.0))
            overall = &run;
    }
    selected["schemes"] = std::move(per_scheme);
    if (overall) selected["selected_scheme"] = overall->name;
    hrv::atomic_write_text(out_dir / "selected.json", selected.dump(2) + "\n");

    hrv::save_config(out_dir / "effective_config.json", cfg);
}

int cmd_experiment(const CommonOptions& opt, const std::string& features_csv) {
    hrv::PipelineConfig cfg = resolve_config(opt);
    const fs::path out_dir(cfg.out_dir);
    fs::create_directories(out_dir);

    const hrv::FeatureMatrix features = obtain_features(cfg, features_csv, out_dir);

    std::vector<hrv::SchemeSpec> specs;
    for (hrv::SchemeKind kind : cfg.schemes)
        specs.push_back({kind, cfg.pca, cfg.stepwise});

    const hrv::RunReport report = hrv::run_experiment(features, specs, cfg.experiment);
    write_experiment_outputs(out_dir, report, cfg);

    const hrv::Summary summary = hrv::summarize(report);
    for (std::size_t s = 0; s < summary.schemes.size(); ++s) {
        const hrv::SchemeSummary& ss = summary.schemes[s];
        const hrv::InputScheme& scheme = report.schemes[s].scheme;
        std::cout << ss.name << ": ";
        if (scheme.kind == hrv::SchemeKind::pca) {
            std::cout << scheme.dimension() << " components, "
                      << hrv::fmt_double(100.0 * scheme.cumulative_explained)
                      << " % of variance; ";
        } else if (scheme.kind == hrv::SchemeKind::stepwise) {
            const auto names = scheme.input_names();
            std::cout << "selected ";
            for (std::size_t i = 0; i < names.size(); ++i)
                std::cout << (i == 0 ? "" : ", ") << names[i];
            std::cout << "; ";
        } else {
            std::cout << "all " << scheme.dimension() << " inputs; ";
        }
        if (ss.best_acc)
            std::cout << "best acc " << hrv::fmt_double(*ss.best_acc) << " % at "
                      << ss.best_hidden << " hidden\n";
        else
            std::cout << "best acc n/a\n";
    }
    std::cout << "reports under " << out_dir.string() << '\n';
    return 0;
}

// Rebuild summary outputs from a repetitions.csv produced earlier.
int cmd_report(const std::string& repetitions_csv, const std::string& out) {
    std::ifstream in(repetitions_csv, std::ios::binary);
    if (!in) throw hrv::IoError("cannot open " + repetitions_csv);

    hrv::RunReport report;
    std::map<std::string, std::size_t> scheme_index;
    std::vector<std::size_t> hidden_seen;
    std::string line;
    bool header = true;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (header) {
            if (line != "scheme,hidden,rep,seed,sen,spe,pre,acc,auc")
                throw hrv::SchemaError("unexpected repetitions header");
            header = false;
            continue;
        }
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ',')) fields.push_back(f);
        while (fields.size() < 9) fields.emplace_back();
        if (fields.size() != 9) throw hrv::ParseError("bad repetitions row", line_no);

        auto [it, inserted] = scheme_index.try_emplace(fields[0], report.schemes.size());
        if (inserted) {
            hrv::SchemeRun run;
            run.name = fields[0];
            report.schemes.push_back(std::move(run));
        }
        hrv::RepetitionResult r;
        r.scheme_index = it->second;
        r.hidden = std::stoul(fields[1]);
        r.rep = std::stoul(fields[2]);
        r.seed = std::stoull(fields[3]);
        if (std::find(hidden_seen.begin(), hidden_seen.end(), r.hidden) == hidden_seen.end())
            hidden_seen.push_back(r.hidden);
        auto opt_field = [&](const std::string& s) -> std::optional<double> {
            if (s.empty()) return std::nullopt;
            return std::stod(s);
        };
        r.metrics.sen = opt_field(fields[4]);
        r.metrics.spe = opt_field(fields[5]);
        r.metrics.pre = opt_field(fields[6]);
        r.metrics.acc = opt_field(fields[7]);
        const auto auc = opt_field(fields[8]);
        if (auc)
            r.auc = *auc / 100.0;
        else
            r.failure = "row has no indexes";
        report.schemes[it->second].reps.push_back(std::move(r));
    }
    std::sort(hidden_seen.begin(), hidden_seen.end());
    report.config.hidden_sizes = hidden_seen;
    for (hrv::SchemeRun& run : report.schemes) {
        for (std::size_t i = 0; i < run.reps.size(); ++i) {
            if (!run.reps[i].failure.empty()) continue;
            if (!run.has_best) {
                run.has_best = true;
                run.best_index = i;
            } else if (run.reps[i].metrics.acc.value_or(-1.0) >
                       run.reps[run.best_index].metrics.acc.value_or(-1.0)) {
                run.best_index = i;
            }
        }
    }

    const fs::path out_dir = out.empty() ? fs::path(repetitions_csv).parent_path() : fs::path(out);
    fs::create_directories(out_dir);
    const hrv::Summary summary = hrv::summarize(report);
    hrv::write_summary_csv(out_dir / "summary.csv", summary);
    hrv::write_summary_table(out_dir / "summary_table.txt", summary, report);
    hrv::write_histograms_csv(out_dir / "histograms.csv", report);
    std::cout << "summaries rebuilt under " << out_dir.string() << '\n';
    return 0;
}

int cmd_predict(const CommonOptions& opt, const std::string& model_path,
                const std::string& rr_path, int age, const std::string& gender) {
    hrv::PipelineConfig cfg;
    if (!opt.config_path.empty()) cfg = hrv::load_config(opt.config_path);

    const hrv::ModelBundle bundle = hrv::load_model(model_path);
    const hrv::RRSeries rr = hrv::read_rr_file(rr_path);
    hrv::Gender g;
    if (gender == "M")
        g = hrv::Gender::male;
    else if (gender == "F")
        g = hrv::Gender::female;
    else
        throw hrv::SchemaError("gender must be M or F");

    const hrv::Prediction p = hrv::predict_subject(bundle, rr, age, g, cfg);
    std::cout << "class=" << hrv::to_string(p.label) << " score=" << hrv::fmt_double(p.score)
              << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"HRV feature extraction and ANN classification pipeline"};
    app.require_subcommand(1);

    CommonOptions synth_opt, feat_opt, exp_opt, pred_opt;
    std::string spec_path, features_csv, model_path, rr_path, gender, repetitions_csv, report_out;
    int age = 0;

    CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic labeled cohort");
    synth->add_option("--spec", spec_path, "Cohort spec file (JSON)");
    synth->add_option("--out", synth_opt.out_dir, "Output directory");
    synth->add_option("--seed", synth_opt.seed, "Master seed");

    CLI::App* features = app.add_subcommand("features", "Extract the per-subject feature table");
    add_common_flags(features, feat_opt, false);

    CLI::App* experiment =
        app.add_subcommand("experiment", "Run the repeated-split ANN evaluation");
    add_common_flags(experiment, exp_opt, true);
    experiment->add_option("--features", features_csv, "Reuse an existing features.csv");

    CLI::App* report = app.add_subcommand("report", "Re-summarize a repetitions.csv");
    report->add_option("--repetitions", repetitions_csv, "repetitions.csv path")->required();
    report->add_option("--out", report_out, "Output directory (defaults beside the input)");

    CLI::App* predict = app.add_subcommand("predict", "Score one RR recording with a saved model");
    predict->add_option("--model", model_path, "Model bundle JSON")->required();
    predict->add_option("--rr", rr_path, "RR interval file")->required();
    predict->add_option("--age", age, "Subject age in years")->required();
    predict->add_option("--gender", gender, "Subject gender (M|F)")->required();
    predict->add_option("--config", pred_opt.config_path, "Pipeline config file (JSON)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth->parsed()) return cmd_synth(synth_opt, spec_path);
        if (features->parsed()) return cmd_features(feat_opt);
        if (experiment->parsed()) return cmd_experiment(exp_opt, features_csv);
        if (report->parsed()) return cmd_report(repetitions_csv, report_out);
        if (predict->parsed()) return cmd_predict(pred_opt, model_path, rr_path, age, gender);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
