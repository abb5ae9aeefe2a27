#ifndef HRV_TIME_FEATURES_HPP
#define HRV_TIME_FEATURES_HPP

#include <span>

namespace hrv {

/// Standard time-domain HRV parameters of one beat-domain segment.
struct TimeFeatures {
    double mean_rr_ms = 0.0;
    double sdnn_ms = 0.0;  // sample SD, divisor n-1
    double rmssd_ms = 0.0; // over the n-1 successive differences
    double nn50 = 0.0;     // count of |diff| strictly above the threshold
    double pnn50 = 0.0;    // percent of the n-1 differences
};

TimeFeatures compute_time_features(std::span<const double> rr_ms, double nn_threshold_ms = 50.0);

} // namespace hrv

#endif // HRV_TIME_FEATURES_HPP
