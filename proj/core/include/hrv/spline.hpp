#ifndef HRV_SPLINE_HPP
#define HRV_SPLINE_HPP

#include <vector>

namespace hrv {

/// Natural cubic spline through (x, y) knots with strictly increasing x.
/// Outside the knot range the boundary polynomial is extended, so constant
/// and linear data reproduce exactly everywhere. Two knots degenerate to a
/// straight line.
class CubicSpline {
public:
    CubicSpline(std::vector<double> x, std::vector<double> y);

    double operator()(double t) const;

    std::size_t knot_count() const { return x_.size(); }

private:
    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> b_, c_, d_; // per-segment coefficients
};

} // namespace hrv

#endif // HRV_SPLINE_HPP
