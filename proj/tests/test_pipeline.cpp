#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "hrv/config.hpp"
#include "hrv/pipeline.hpp"
#include "hrv/report.hpp"
#include "hrv/synth.hpp"

using namespace hrv;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("hrv_test_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

SynthCohort small_cohort(std::size_t n_normal, std::size_t n_ihd, double duration_s,
                         std::uint64_t seed) {
    CohortSpec spec;
    spec.n_normal = n_normal;
    spec.n_ihd = n_ihd;
    spec.normal.profile.duration_s = duration_s;
    spec.ihd.profile.duration_s = duration_s;
    spec.normal.profile.artifact_rate = 0.01;
    spec.ihd.profile.artifact_rate = 0.01;
    spec.master_seed = seed;
    return gen_cohort(spec);
}

} // namespace

TEST_SUITE("config") {

TEST_CASE("defaults encode the protocol constants") {
    PipelineConfig cfg;
    CHECK(cfg.segmentation.segment_s == 300.0);
    CHECK(cfg.segmentation.rate_hz == 2.0);
    CHECK(cfg.bands.lf_lo_hz == 0.04);
    CHECK(cfg.bands.lf_hi_hz == 0.15);
    CHECK(cfg.bands.hf_hi_hz == 0.40);
    CHECK(cfg.pca.variance_target == 0.90);
    CHECK(cfg.stepwise.entry_p == 0.05);
    CHECK(cfg.experiment.hidden_sizes == std::vector<std::size_t>{2, 3, 4, 5, 6});
    CHECK(cfg.experiment.train_fraction == 0.75);
    CHECK(cfg.experiment.repetitions == 100);
    CHECK(cfg.schemes.size() == 3);
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("config round-trips byte-identically") {
    const fs::path dir = temp_dir("config_rt");
    PipelineConfig cfg;
    cfg.manifest = "some/manifest.csv";
    cfg.experiment.master_seed = 987;
    cfg.experiment.hidden_sizes = {2, 4};
    cfg.schemes = {SchemeKind::stepwise};
    save_config(dir / "a.json", cfg);
    const PipelineConfig loaded = load_config(dir / "a.json");
    save_config(dir / "b.json", loaded);

    std::ifstream fa(dir / "a.json"), fb(dir / "b.json");
    std::string sa((std::istreambuf_iterator<char>(fa)), std::istreambuf_iterator<char>());
    std::string sb((std::istreambuf_iterator<char>(fb)), std::istreambuf_iterator<char>());
    CHECK(sa == sb);
    CHECK(loaded.experiment.master_seed == 987);
    CHECK(loaded.schemes == std::vector<SchemeKind>{SchemeKind::stepwise});
}

TEST_CASE("invalid values are rejected") {
    PipelineConfig cfg;
    cfg.experiment.hidden_sizes = {9};
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = PipelineConfig{};
    cfg.stepwise.removal_p = 0.01; // below entry_p
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = PipelineConfig{};
    cfg.pca.variance_target = 1.5;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

} // TEST_SUITE

TEST_SUITE("pipeline") {

TEST_CASE("feature extraction accepts good subjects and names rejects") {
    SynthCohort synth = small_cohort(4, 3, 650.0, 31);
    // sabotage one subject with a recording too short to segment
    synth.cohort.subjects[1].rr = make_rr_series(std::vector<double>(220, 900.0));

    PipelineConfig cfg;
    const FeatureExtraction fx = extract_features(synth.cohort, cfg, 2);
    CHECK(fx.matrix.n_subjects() == 6);
    REQUIRE(fx.rejects().size() == 1);
    CHECK(fx.rejects()[0]->subject_id == synth.cohort.subjects[1].subject_id);
    CHECK(fx.rejects()[0]->reject_reason.find("needs >= 300") != std::string::npos);

    // all 17 columns populated and finite
    for (Eigen::Index r = 0; r < fx.matrix.rows.rows(); ++r)
        for (Eigen::Index c = 0; c < fx.matrix.rows.cols(); ++c)
            CHECK(std::isfinite(fx.matrix.rows(r, c)));
}

TEST_CASE("extraction is deterministic and independent of worker count") {
    const SynthCohort synth = small_cohort(5, 4, 650.0, 33);
    PipelineConfig cfg;
    const FeatureExtraction a = extract_features(synth.cohort, cfg, 1);
    const FeatureExtraction b = extract_features(synth.cohort, cfg, 3);
    REQUIRE(a.matrix.n_subjects() == b.matrix.n_subjects());
    CHECK(a.matrix.rows == b.matrix.rows);
    CHECK(a.matrix.subject_ids == b.matrix.subject_ids);
}

TEST_CASE("features csv round-trips") {
    const fs::path dir = temp_dir("features_rt");
    const SynthCohort synth = small_cohort(3, 3, 650.0, 35);
    PipelineConfig cfg;
    const FeatureExtraction fx = extract_features(synth.cohort, cfg, 2);
    write_features_csv(dir / "features.csv", fx.matrix);
    const FeatureMatrix loaded = load_features_csv(dir / "features.csv");
    REQUIRE(loaded.n_subjects() == fx.matrix.n_subjects());
    CHECK(loaded.subject_ids == fx.matrix.subject_ids);
    CHECK(loaded.labels == fx.matrix.labels);
    for (Eigen::Index r = 0; r < loaded.rows.rows(); ++r)
        for (Eigen::Index c = 0; c < loaded.rows.cols(); ++c)
            CHECK(loaded.rows(r, c) ==
                  doctest::Approx(fx.matrix.rows(r, c)).epsilon(1e-9));
}

TEST_CASE("debug dumps appear when enabled") {
    const fs::path dir = temp_dir("dumps");
    const SynthCohort synth = small_cohort(2, 2, 310.0, 37);
    PipelineConfig cfg;
    cfg.out_dir = dir.string();
    cfg.dump_preprocessed = true;
    cfg.dump_psd = true;
    extract_features(synth.cohort, cfg, 1);
    CHECK(fs::exists(dir / "debug" / "N0001_clean.tsv"));
    CHECK(fs::exists(dir / "debug" / "N0001_seg0_psd.tsv"));
}

TEST_CASE("model bundle round-trips and predicts a held-out subject") {
    const SynthCohort synth = small_cohort(30, 24, 650.0, 39);
    PipelineConfig cfg;
    const FeatureExtraction fx = extract_features(synth.cohort, cfg, 2);

    ExperimentConfig ex;
    ex.hidden_sizes = {2};
    ex.repetitions = 3;
    ex.train.max_epochs = 300;
    ex.jobs = 2;
    const RunReport report =
        run_experiment(fx.matrix, {{SchemeKind::stepwise, {}, {}}}, ex);
    REQUIRE(report.schemes[0].has_best);
    const RepetitionResult& best = best_repetition(report.schemes[0]);

    ModelBundle bundle;
    bundle.scheme = report.schemes[0].scheme;
    bundle.input_stats = best.input_stats;
    bundle.net = best.net;
    bundle.scheme_name = "stepwise";
    bundle.hidden = best.hidden;
    bundle.seed = best.seed;

    const fs::path dir = temp_dir("model_rt");
    save_model(dir / "model.json", bundle);
    const ModelBundle loaded = load_model(dir / "model.json");
    CHECK(loaded.scheme_name == "stepwise");
    CHECK(loaded.net.w1 == bundle.net.w1);
    CHECK(loaded.scheme.selected == bundle.scheme.selected);

    // fresh subjects from each class profile
    CohortSpec holdout;
    holdout.n_normal = 6;
    holdout.n_ihd = 6;
    holdout.normal.profile.duration_s = 650.0;
    holdout.ihd.profile.duration_s = 650.0;
    holdout.master_seed = 555;
    const SynthCohort hc = gen_cohort(holdout);
    std::size_t correct = 0;
    for (const SubjectRecord& s : hc.cohort.subjects) {
        const Prediction p = predict_subject(loaded, s.rr, s.age, s.gender, cfg);
        if (p.label == s.label) ++correct;
        CHECK(p.score > 0.0);
        CHECK(p.score < 1.0);
    }
    CHECK(correct >= 9); // default class profiles are well separated
}

TEST_CASE("prediction is reproducible") {
    const SynthCohort synth = small_cohort(6, 5, 650.0, 41);
    PipelineConfig cfg;
    const FeatureExtraction fx = extract_features(synth.cohort, cfg, 2);
    ExperimentConfig ex;
    ex.hidden_sizes = {2};
    ex.repetitions = 2;
    ex.train.max_epochs = 100;
    ex.jobs = 1;
    const RunReport report = run_experiment(fx.matrix, {{SchemeKind::all, {}, {}}}, ex);
    const RepetitionResult& best = best_repetition(report.schemes[0]);

    ModelBundle bundle;
    bundle.scheme = report.schemes[0].scheme;
    bundle.input_stats = best.input_stats;
    bundle.net = best.net;
    bundle.scheme_name = "all";

    const SubjectRecord& probe = synth.cohort.subjects[0];
    const Prediction p1 = predict_subject(bundle, probe.rr, probe.age, probe.gender, cfg);
    const Prediction p2 = predict_subject(bundle, probe.rr, probe.age, probe.gender, cfg);
    CHECK(p1.score == p2.score);
    CHECK(p1.label == p2.label);
}

} // TEST_SUITE

TEST_SUITE("report_files") {

TEST_CASE("writers emit headers and deterministic bytes") {
    const fs::path dir = temp_dir("report_files");
    const SynthCohort synth = small_cohort(8, 6, 650.0, 43);
    PipelineConfig cfg;
    const FeatureExtraction fx = extract_features(synth.cohort, cfg, 2);
    ExperimentConfig ex;
    ex.hidden_sizes = {2, 3};
    ex.repetitions = 4;
    ex.train.max_epochs = 150;
    ex.jobs = 2;
    const RunReport report = run_experiment(fx.matrix, {{SchemeKind::all, {}, {}}}, ex);

    write_repetitions_csv(dir / "reps_a.csv", report);
    write_repetitions_csv(dir / "reps_b.csv", report);
    std::ifstream fa(dir / "reps_a.csv"), fb(dir / "reps_b.csv");
    std::string sa((std::istreambuf_iterator<char>(fa)), std::istreambuf_iterator<char>());
    std::string sb((std::istreambuf_iterator<char>(fb)), std::istreambuf_iterator<char>());
    CHECK(sa == sb);
    CHECK(sa.rfind("scheme,hidden,rep,seed,sen,spe,pre,acc,auc\n", 0) == 0);
    // 2 hidden sizes x 4 reps + header
    CHECK(std::count(sa.begin(), sa.end(), '\n') == 9);

    const Summary summary = summarize(report);
    write_summary_csv(dir / "summary.csv", summary);
    write_histograms_csv(dir / "hist.csv", report);
    write_summary_table(dir / "table.txt", summary, report);
    write_roc_csv(dir / "roc.csv",
                  roc(best_repetition(report.schemes[0]).test_scores,
                      best_repetition(report.schemes[0]).test_labels));
    for (const char* name : {"summary.csv", "hist.csv", "table.txt", "roc.csv"})
        CHECK(fs::file_size(dir / name) > 0);

    std::ifstream roc_in(dir / "roc.csv");
    std::string first_line;
    std::getline(roc_in, first_line);
    CHECK(first_line == "fpr,tpr");
}

} // TEST_SUITE
