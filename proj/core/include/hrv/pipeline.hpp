#ifndef HRV_PIPELINE_HPP
#define HRV_PIPELINE_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hrv/config.hpp"
#include "hrv/evaluation.hpp"
#include "hrv/features.hpp"
#include "hrv/network.hpp"
#include "hrv/preprocess.hpp"
#include "hrv/schemes.hpp"

namespace hrv {

/// All per-segment feature parameters in one bag.
struct FeatureParams {
    BandEdges bands;
    double beta_fit_lo_hz = 0.0;
    double beta_fit_hi_hz = 0.40;
    std::size_t higuchi_k_max = 10;
    double nn_threshold_ms = 50.0;
    double rate_hz = 2.0;
    std::size_t samples_per_segment = 600;
};

FeatureParams feature_params(const PipelineConfig& cfg);

/// Segment-level feature extraction. Spectral entries and the two ratios
/// may come back missing (degenerate spectrum, zero denominator); anything
/// else propagates as an error.
SegmentFeatures compute_segment_features(const Segment& segment, const FeatureParams& params);

struct SubjectOutcome {
    std::string subject_id;
    std::optional<FeatureVector> features; // empty = rejected
    std::string reject_reason;
    std::size_t n_segments = 0;
    double artifact_fraction = 0.0;
};

/// Preprocess one subject and average its per-segment features.
SubjectOutcome process_subject(const SubjectRecord& subject, const PipelineConfig& cfg,
                               const std::filesystem::path& dump_dir = {});

struct FeatureExtraction {
    FeatureMatrix matrix; // accepted subjects only
    std::vector<SubjectOutcome> outcomes;

    std::vector<const SubjectOutcome*> rejects() const;
};

/// Whole-cohort feature extraction; subjects are processed in parallel and
/// reassembled in manifest order.
FeatureExtraction extract_features(const Cohort& cohort, const PipelineConfig& cfg,
                                   std::size_t jobs = 0);

void write_features_csv(const std::filesystem::path& path, const FeatureMatrix& matrix);
FeatureMatrix load_features_csv(const std::filesystem::path& path);
void write_rejects_csv(const std::filesystem::path& path,
                       const std::vector<SubjectOutcome>& outcomes);

/// Everything cmd_predict needs to score a new recording: the fitted input
/// scheme, the training-row standardization of the scheme outputs, and the
/// trained network.
struct ModelBundle {
    InputScheme scheme;
    ColumnStats input_stats;
    Network net;
    std::string scheme_name;
    std::size_t hidden = 0;
    std::uint64_t seed = 0;
};

void save_model(const std::filesystem::path& path, const ModelBundle& bundle);
ModelBundle load_model(const std::filesystem::path& path);

/// Preprocess -> features -> scheme transform -> forward pass.
Prediction predict_subject(const ModelBundle& bundle, const RRSeries& rr, int age, Gender gender,
                           const PipelineConfig& cfg);

} // namespace hrv

#endif // HRV_PIPELINE_HPP
