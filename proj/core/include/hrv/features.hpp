#ifndef HRV_FEATURES_HPP
#define HRV_FEATURES_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hrv/rr_series.hpp"

namespace hrv {

/// Fixed column order of the model inputs: 15 per-segment HRV parameters
/// averaged over the recording, then age and gender (0 = female, 1 = male).
enum FeatureIndex : std::size_t {
    kMeanRr = 0,
    kSdnn,
    kRmssd,
    kNn50,
    kPnn50,
    kLf,
    kHf,
    kLfHf,
    kLfn,
    kHfn,
    kSd1,
    kSd2,
    kSd1Sd2,
    kFd,
    kBeta,
    kAge,
    kGender,
    kFeatureCount // 17
};

inline constexpr std::array<const char*, kFeatureCount> kFeatureNames = {
    "mean_rr", "sdnn", "rmssd", "nn50", "pnn50", "lf",  "hf",  "lf_hf", "lfn",
    "hfn",     "sd1",  "sd2",   "sd1_sd2", "fd", "beta", "age", "gender"};

/// One segment's HRV parameters. Ratio and spectral entries may be missing
/// (degenerate spectrum, zero denominator); a missing entry is skipped by
/// the subject average.
struct SegmentFeatures {
    std::array<std::optional<double>, kFeatureCount> values{};

    std::optional<double>& operator[](std::size_t i) { return values[i]; }
    const std::optional<double>& operator[](std::size_t i) const { return values[i]; }
};

using FeatureVector = std::array<double, kFeatureCount>;

/// Mean over segments per component, ignoring missing entries; age and
/// gender appended. Throws NoSegmentsError on empty input and SchemaError
/// when a component is missing in every segment.
FeatureVector average_subject_features(const std::vector<SegmentFeatures>& segments, int age,
                                       Gender gender);

struct FeatureMatrix {
    Eigen::MatrixXd rows; // one subject per row, kFeatureCount columns
    std::vector<ClassLabel> labels;
    std::vector<std::string> subject_ids;

    std::size_t n_subjects() const { return static_cast<std::size_t>(rows.rows()); }
};

/// Per-column z-score parameters estimated on a subset of rows.
struct ColumnStats {
    Eigen::VectorXd mean;
    Eigen::VectorXd sd; // sample SD, divisor n-1

    Eigen::MatrixXd apply(const Eigen::MatrixXd& m) const;
    Eigen::VectorXd apply(const Eigen::VectorXd& v) const;
};

/// Fit z-score statistics on the given rows (all rows when fit_rows is
/// empty). Throws ConstantFeatureError naming the first zero-SD column.
ColumnStats fit_column_stats(const Eigen::MatrixXd& m, const std::vector<std::size_t>& fit_rows,
                             const std::vector<std::string>& column_names = {});

/// Convenience: fit on fit_rows, transform every row.
std::pair<Eigen::MatrixXd, ColumnStats> standardize(const Eigen::MatrixXd& m,
                                                    const std::vector<std::size_t>& fit_rows);

} // namespace hrv

#endif // HRV_FEATURES_HPP
