#ifndef HRV_EVALUATION_HPP
#define HRV_EVALUATION_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hrv/features.hpp"
#include "hrv/network.hpp"
#include "hrv/schemes.hpp"

namespace hrv {

struct SplitPlan {
    std::vector<std::size_t> train_rows;
    std::vector<std::size_t> test_rows;
    std::uint64_t seed = 0;
};

/// Random 75/25 split, stratified per class by default so every repetition
/// sees the same class balance. Each class needs at least 4 subjects.
SplitPlan split(const std::vector<ClassLabel>& labels, double train_fraction, std::uint64_t seed,
                bool stratified = true);

/// Confusion-matrix indexes in percent, IHD treated as the positive class.
/// A ratio with a zero denominator is reported as missing.
struct Metrics {
    std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
    std::optional<double> sen, spe, pre, acc;
};

Metrics confusion_metrics(const std::vector<ClassLabel>& predictions,
                          const std::vector<ClassLabel>& labels);

struct RocCurve {
    std::vector<std::pair<double, double>> points; // (fpr, tpr), threshold descending
    double auc = 0.0;                              // trapezoidal, in [0, 1]
};

/// Threshold sweep over the sorted unique scores (predict IHD when
/// score >= threshold), tied scores grouped into one step.
RocCurve roc(const std::vector<double>& scores, const std::vector<ClassLabel>& labels);

/// How a scheme is (re)fitted inside the experiment.
struct SchemeSpec {
    SchemeKind kind = SchemeKind::all;
    PcaParams pca;
    StepwiseParams stepwise;
};

struct ExperimentConfig {
    std::vector<std::size_t> hidden_sizes = {2, 3, 4, 5, 6};
    std::size_t repetitions = 100;
    double train_fraction = 0.75;
    bool stratified = true;
    bool per_split_fit = false; // refit schemes on each repetition's training rows
    std::uint64_t master_seed = 42;
    std::size_t jobs = 0; // 0 = hardware concurrency
    double max_divergent_fraction = 0.10;
    TrainConfig train;
};

struct RepetitionResult {
    std::size_t scheme_index = 0;
    std::size_t hidden = 0;
    std::size_t rep = 0;
    std::uint64_t seed = 0;
    std::string failure; // empty = usable repetition
    Metrics metrics;
    double auc = 0.0;
    // retained so the best repetition's model and ROC can be emitted
    Network net;
    ColumnStats input_stats;
    std::vector<double> test_scores;
    std::vector<ClassLabel> test_labels;
    std::optional<InputScheme> per_rep_scheme; // set when per_split_fit
};

struct SchemeRun {
    std::string name;
    InputScheme scheme; // cohort-level fit (reference fit when per_split_fit)
    std::vector<RepetitionResult> reps;
    std::optional<InputScheme> best_scheme; // set when per_split_fit
    std::size_t best_index = 0;             // into reps; valid when any usable
    bool has_best = false;
};

struct RunReport {
    std::vector<SchemeRun> schemes;
    std::vector<std::string> warnings;
    ExperimentConfig config;
};

/// The full protocol: for every scheme x hidden size x repetition, derive a
/// repetition seed, split, standardize the scheme inputs on the training
/// rows, train a network, and evaluate on the held-out rows. Repetitions
/// are independent jobs; the report is identical for any worker count.
RunReport run_experiment(const FeatureMatrix& features, const std::vector<SchemeSpec>& schemes,
                         const ExperimentConfig& cfg);

const RepetitionResult& best_repetition(const SchemeRun& run);

} // namespace hrv

#endif // HRV_EVALUATION_HPP
