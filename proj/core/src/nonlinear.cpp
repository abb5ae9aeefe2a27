#include "hrv/nonlinear.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "hrv/errors.hpp"

namespace hrv {

PoincareFeatures poincare(std::span<const double> rr_ms) {
    const std::size_t n = rr_ms.size();
    if (n < 3) throw TooShortError("poincare needs >= 3 intervals, got " + std::to_string(n));

    double mean = 0.0;
    for (double v : rr_ms) mean += v;
    mean /= static_cast<double>(n);
    double var_x = 0.0;
    for (double v : rr_ms) var_x += (v - mean) * (v - mean);
    var_x /= static_cast<double>(n);

    const std::size_t nd = n - 1;
    double dmean = 0.0;
    for (std::size_t i = 0; i < nd; ++i) dmean += rr_ms[i + 1] - rr_ms[i];
    dmean /= static_cast<double>(nd);
    double var_d = 0.0;
    for (std::size_t i = 0; i < nd; ++i) {
        const double d = rr_ms[i + 1] - rr_ms[i] - dmean;
        var_d += d * d;
    }
    var_d /= static_cast<double>(nd);

    PoincareFeatures f;
    f.sd1_ms = std::sqrt(var_d / 2.0);
    const double sd2_sq = 2.0 * var_x - var_d / 2.0;
    f.sd2_ms = sd2_sq > 0.0 ? std::sqrt(sd2_sq) : 0.0;
    if (f.sd2_ms > 0.0) f.sd1_sd2 = f.sd1_ms / f.sd2_ms;
    return f;
}

FractalFeatures higuchi_fd(std::span<const double> x, std::size_t k_max) {
    const std::size_t n = x.size();
    if (k_max < 2) throw ConfigError("higuchi k_max must be >= 2");
    if (n < 2 * k_max + 2)
        throw TooShortError("higuchi needs >= " + std::to_string(2 * k_max + 2) +
                            " points, got " + std::to_string(n));

    std::vector<double> log_k(k_max), log_l(k_max);
    for (std::size_t k = 1; k <= k_max; ++k) {
        double l_sum = 0.0;
        for (std::size_t m = 0; m < k; ++m) {
            const std::size_t terms = (n - 1 - m) / k;
            double length = 0.0;
            for (std::size_t i = 1; i <= terms; ++i)
                length += std::abs(x[m + i * k] - x[m + (i - 1) * k]);
            // Normalize by the curve coverage, then by the lag itself.
            length *= static_cast<double>(n - 1) /
                      (static_cast<double>(terms) * static_cast<double>(k));
            l_sum += length / static_cast<double>(k);
        }
        const double l_k = l_sum / static_cast<double>(k);
        if (!(l_k > 0.0))
            throw Error("higuchi: zero curve length at lag " + std::to_string(k) +
                        " (constant input)");
        log_k[k - 1] = std::log(static_cast<double>(k));
        log_l[k - 1] = std::log(l_k);
    }

    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < k_max; ++i) {
        sx += log_k[i];
        sy += log_l[i];
        sxx += log_k[i] * log_k[i];
        sxy += log_k[i] * log_l[i];
    }
    const double dm = static_cast<double>(k_max);
    const double slope = (sxy - sx * sy / dm) / (sxx - sx * sx / dm);

    FractalFeatures f;
    f.fd = -slope;
    f.k_max = k_max;
    return f;
}

} // namespace hrv
