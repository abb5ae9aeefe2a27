#include "hrv/features.hpp"

#include <cmath>

#include "hrv/errors.hpp"

namespace hrv {

FeatureVector average_subject_features(const std::vector<SegmentFeatures>& segments, int age,
                                       Gender gender) {
    if (segments.empty()) throw NoSegmentsError("subject has no usable segments");

    FeatureVector out{};
    for (std::size_t c = 0; c < kFeatureCount; ++c) {
        if (c == kAge) {
            out[c] = static_cast<double>(age);
            continue;
        }
        if (c == kGender) {
            out[c] = gender == Gender::male ? 1.0 : 0.0;
            continue;
        }
        double sum = 0.0;
        std::size_t count = 0;
        for (const auto& seg : segments) {
            if (seg[c]) {
                sum += *seg[c];
                ++count;
            }
        }
        if (count == 0)
            throw SchemaError(std::string("feature '") + kFeatureNames[c] +
                              "' is missing in every segment");
        out[c] = sum / static_cast<double>(count);
    }
    return out;
}

Eigen::MatrixXd ColumnStats::apply(const Eigen::MatrixXd& m) const {
    if (m.cols() != mean.size()) throw ShapeError("column stats do not match matrix width");
    Eigen::MatrixXd out = m;
    out.rowwise() -= mean.transpose();
    out.array().rowwise() /= sd.transpose().array();
    return out;
}

Eigen::VectorXd ColumnStats::apply(const Eigen::VectorXd& v) const {
    if (v.size() != mean.size()) throw ShapeError("column stats do not match vector length");
    return (v - mean).cwiseQuotient(sd);
}

ColumnStats fit_column_stats(const Eigen::MatrixXd& m, const std::vector<std::size_t>& fit_rows,
                             const std::vector<std::string>& column_names) {
    const auto n_cols = m.cols();
    std::vector<std::size_t> rows = fit_rows;
    if (rows.empty()) {
        rows.resize(static_cast<std::size_t>(m.rows()));
        for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
    }
    if (rows.size() < 2) throw ShapeError("standardization needs >= 2 fitting rows");

    ColumnStats stats;
    stats.mean = Eigen::VectorXd::Zero(n_cols);
    stats.sd = Eigen::VectorXd::Zero(n_cols);
    const double n = static_cast<double>(rows.size());
    for (std::size_t r : rows) stats.mean += m.row(static_cast<Eigen::Index>(r)).transpose();
    stats.mean /= n;
    for (std::size_t r : rows) {
        Eigen::VectorXd d = m.row(static_cast<Eigen::Index>(r)).transpose() - stats.mean;
        stats.sd += d.cwiseProduct(d);
    }
    stats.sd = (stats.sd / (n - 1.0)).cwiseSqrt();

    for (Eigen::Index c = 0; c < n_cols; ++c) {
        if (!(stats.sd[c] > 0.0)) {
            const std::string name = static_cast<std::size_t>(c) < column_names.size()
                                         ? column_names[static_cast<std::size_t>(c)]
                                         : "column " + std::to_string(c);
            throw ConstantFeatureError("feature '" + name + "' is constant on the fitting rows");
        }
    }
    return stats;
}

std::pair<Eigen::MatrixXd, ColumnStats> standardize(const Eigen::MatrixXd& m,
                                                    const std::vector<std::size_t>& fit_rows) {
    std::vector<std::string> names(kFeatureNames.begin(), kFeatureNames.end());
    if (m.cols() != static_cast<Eigen::Index>(kFeatureCount)) names.clear();
    ColumnStats stats = fit_column_stats(m, fit_rows, names);
    return {stats.apply(m), std::move(stats)};
}

} // namespace hrv
