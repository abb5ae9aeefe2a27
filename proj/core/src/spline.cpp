#include "hrv/spline.hpp"

#include <algorithm>
#include <stdexcept>

namespace hrv {

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n)
        throw std::invalid_argument("CubicSpline needs >= 2 matching knots");
    for (std::size_t i = 1; i < n; ++i)
        if (!(x_[i] > x_[i - 1]))
            throw std::invalid_argument("CubicSpline abscissae must be strictly increasing");

    b_.assign(n, 0.0);
    c_.assign(n, 0.0);
    d_.assign(n, 0.0);

    if (n == 2) {
        b_[0] = b_[1] = (y_[1] - y_[0]) / (x_[1] - x_[0]);
        return;
    }

    // Second derivatives from the natural-boundary tridiagonal system,
    // solved with the Thomas algorithm.
    std::vector<double> h(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) h[i] = x_[i + 1] - x_[i];

    std::vector<double> diag(n, 0.0), rhs(n, 0.0);
    diag[0] = 1.0;
    diag[n - 1] = 1.0;
    std::vector<double> sub(n, 0.0), sup(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        sub[i] = h[i - 1];
        diag[i] = 2.0 * (h[i - 1] + h[i]);
        sup[i] = h[i];
        rhs[i] = 6.0 * ((y_[i + 1] - y_[i]) / h[i] - (y_[i] - y_[i - 1]) / h[i - 1]);
    }

    std::vector<double> m(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) {
        double w = sub[i] / diag[i - 1];
        diag[i] -= w * sup[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    m[n - 1] = rhs[n - 1] / diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;)
        m[i] = (rhs[i] - sup[i] * m[i + 1]) / diag[i];

    for (std::size_t i = 0; i + 1 < n; ++i) {
        b_[i] = (y_[i + 1] - y_[i]) / h[i] - h[i] * (2.0 * m[i] + m[i + 1]) / 6.0;
        c_[i] = m[i] / 2.0;
        d_[i] = (m[i + 1] - m[i]) / (6.0 * h[i]);
    }
}

double CubicSpline::operator()(double t) const {
    // Clamp to the boundary segments; their polynomials extend past the ends.
    std::size_t i;
    if (t <= x_.front()) {
        i = 0;
    } else if (t >= x_[x_.size() - 2]) {
        i = x_.size() - 2;
    } else {
        i = static_cast<std::size_t>(
                std::upper_bound(x_.begin(), x_.end(), t) - x_.begin()) - 1;
    }
    const double dx = t - x_[i];
    return y_[i] + dx * (b_[i] + dx * (c_[i] + dx * d_[i]));
}

} // namespace hrv
