#ifndef HRV_NONLINEAR_HPP
#define HRV_NONLINEAR_HPP

#include <optional>
#include <span>

namespace hrv {

/// Poincare-plot dispersion descriptors. Computed with population
/// variances so that sd1^2 + sd2^2 == 2 * Var_p(x) holds exactly before
/// the sd2 clamp.
struct PoincareFeatures {
    double sd1_ms = 0.0;
    double sd2_ms = 0.0;
    std::optional<double> sd1_sd2; // empty when sd2 == 0
};

PoincareFeatures poincare(std::span<const double> rr_ms);

struct FractalFeatures {
    double fd = 0.0;
    std::size_t k_max = 0;
};

/// Higuchi curve-length estimate of the fractal dimension, regression over
/// lags k = 1..k_max. Needs at least 2*k_max + 2 points.
FractalFeatures higuchi_fd(std::span<const double> x, std::size_t k_max = 10);

} // namespace hrv

#endif // HRV_NONLINEAR_HPP
