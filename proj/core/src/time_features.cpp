#include "hrv/time_features.hpp"

#include <cmath>
#include <string>

#include "hrv/errors.hpp"

namespace hrv {

TimeFeatures compute_time_features(std::span<const double> rr_ms, double nn_threshold_ms) {
    const std::size_t n = rr_ms.size();
    if (n < 2)
        throw TooShortError("time-domain features need >= 2 intervals, got " + std::to_string(n));

    double sum = 0.0;
    for (double v : rr_ms) sum += v;
    const double mean = sum / static_cast<double>(n);

    double ss = 0.0;
    for (double v : rr_ms) ss += (v - mean) * (v - mean);
    const double sdnn = std::sqrt(ss / static_cast<double>(n - 1));

    double dss = 0.0;
    std::size_t nn50 = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double d = rr_ms[i + 1] - rr_ms[i];
        dss += d * d;
        if (std::abs(d) > nn_threshold_ms) ++nn50;
    }
    const double n_diffs = static_cast<double>(n - 1);

    TimeFeatures f;
    f.mean_rr_ms = mean;
    f.sdnn_ms = sdnn;
    f.rmssd_ms = std::sqrt(dss / n_diffs);
    f.nn50 = static_cast<double>(nn50);
    f.pnn50 = 100.0 * static_cast<double>(nn50) / n_diffs;
    return f;
}

} // namespace hrv
