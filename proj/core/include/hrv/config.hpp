#ifndef HRV_CONFIG_HPP
#define HRV_CONFIG_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "hrv/evaluation.hpp"
#include "hrv/preprocess.hpp"
#include "hrv/spectral.hpp"

namespace hrv {

/// Every tunable of the pipeline in one place. Defaults match the
/// protocol this tool reproduces: 300 s segments resampled at 2 Hz,
/// LF 0.04-0.15 / HF 0.15-0.40 Hz, 90 % PCA variance, p < 0.05 stepwise
/// entry, hidden sizes 2-6, 75/25 splits, 100 repetitions.
struct PipelineConfig {
    std::string manifest;
    std::string out_dir = "hrv_out";

    ArtifactParams artifacts;
    SegmentationParams segmentation;

    BandEdges bands;
    double beta_fit_lo_hz = 0.0;
    double beta_fit_hi_hz = 0.40;
    std::size_t higuchi_k_max = 10;
    double nn_threshold_ms = 50.0;

    std::vector<SchemeKind> schemes = {SchemeKind::pca, SchemeKind::stepwise, SchemeKind::all};
    PcaParams pca;
    StepwiseParams stepwise;

    ExperimentConfig experiment;

    bool dump_preprocessed = false;
    bool dump_psd = false;

    void validate() const;
};

PipelineConfig load_config(const std::filesystem::path& path);
void save_config(const std::filesystem::path& path, const PipelineConfig& cfg);

} // namespace hrv

#endif // HRV_CONFIG_HPP
