#ifndef HRV_PREPROCESS_HPP
#define HRV_PREPROCESS_HPP

#include <cstddef>
#include <filesystem>
#include <vector>

#include "hrv/rr_series.hpp"

namespace hrv {

/// Beat-screening parameters. A beat is flagged when its RR leaves
/// [min_rr_ms, max_rr_ms] or deviates from the median of the last
/// `median_window` accepted beats by more than `ratio_threshold` of
/// that median.
struct ArtifactParams {
    double min_rr_ms = 300.0;
    double max_rr_ms = 2000.0;
    double ratio_threshold = 0.20;
    std::size_t median_window = 5;
};

struct SegmentationParams {
    double segment_s = 300.0;
    double rate_hz = 2.0;
    double max_artifact_fraction = 0.10;
    std::size_t min_beats = 30;
};

struct CleanSeries {
    RRSeries rr;                     // corrected intervals, recomputed beat times
    std::vector<bool> artifact_mask; // true = interval was replaced
    double artifact_fraction = 0.0;
};

struct UniformTachogram {
    std::vector<double> samples_ms;
    double rate_hz = 2.0;
    double t0_s = 0.0;

    double dt_s() const { return 1.0 / rate_hz; }
};

struct Segment {
    std::vector<double> rr_slice_ms;      // intervals whose onset falls in the window
    std::vector<double> uniform_slice_ms; // segment_s * rate_hz uniform samples
    double start_s = 0.0;
    double end_s = 0.0;
    double artifact_fraction = 0.0;
};

std::vector<bool> detect_artifacts(const RRSeries& rr, const ArtifactParams& params = {});

/// Replace flagged intervals with a natural cubic spline over the
/// (onset time, RR) pairs of the normal beats. Needs at least 4 normal
/// beats. Beat times of the result are recomputed from the corrected
/// intervals.
CleanSeries correct_artifacts(const RRSeries& rr, const std::vector<bool>& mask);

/// Evaluate the corrected series on a uniform grid t0, t0+1/rate, ... The
/// grid has floor(duration*rate)+1 points; duration must cover at least one
/// segment (300 s by default).
UniformTachogram resample_uniform(const CleanSeries& clean, double rate_hz = 2.0,
                                  double min_duration_s = 300.0);

/// Cut consecutive non-overlapping windows of segment_s seconds. The
/// trailing partial window is dropped, as are windows whose artifact
/// fraction exceeds max_artifact_fraction or that hold fewer than
/// min_beats interval onsets.
std::vector<Segment> segment_series(const CleanSeries& clean, const UniformTachogram& uniform,
                                    const SegmentationParams& params = {});

/// Debug dump: beat_index, t_s, rr_ms, is_artifact rows (tab-separated).
void write_clean_series(const std::filesystem::path& path, const CleanSeries& clean);

} // namespace hrv

#endif // HRV_PREPROCESS_HPP
