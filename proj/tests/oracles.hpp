// Independent reference implementations used only to cross-check the
// library. Everything here is deliberately written from the defining
// formulas, not by calling the code under test.
#ifndef HRV_TESTS_ORACLES_HPP
#define HRV_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "hrv/network.hpp"
#include "hrv/rr_series.hpp"

namespace oracles {

struct TimeRef {
    double mean, sdnn, rmssd, nn50, pnn50;
};

inline TimeRef time_features(const std::vector<double>& x, double threshold = 50.0) {
    const std::size_t n = x.size();
    TimeRef r{};
    for (double v : x) r.mean += v;
    r.mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : x) ss += (v - r.mean) * (v - r.mean);
    r.sdnn = std::sqrt(ss / static_cast<double>(n - 1));
    double dss = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 1; i < n; ++i) {
        const double d = x[i] - x[i - 1];
        dss += d * d;
        if (std::fabs(d) > threshold) ++count;
    }
    r.rmssd = std::sqrt(dss / static_cast<double>(n - 1));
    r.nn50 = static_cast<double>(count);
    r.pnn50 = 100.0 * static_cast<double>(count) / static_cast<double>(n - 1);
    return r;
}

inline double population_variance(const std::vector<double>& x) {
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    return ss / static_cast<double>(x.size());
}

struct PoincareRef {
    double sd1_sq, sd2_sq; // pre-clamp
};

inline PoincareRef poincare(const std::vector<double>& x) {
    std::vector<double> diffs;
    for (std::size_t i = 1; i < x.size(); ++i) diffs.push_back(x[i] - x[i - 1]);
    PoincareRef r{};
    r.sd1_sq = population_variance(diffs) / 2.0;
    r.sd2_sq = 2.0 * population_variance(x) - r.sd1_sq;
    return r;
}

/// AUC as the normalized Mann-Whitney U statistic, ties counted half.
inline double mann_whitney_auc(const std::vector<double>& scores,
                               const std::vector<hrv::ClassLabel>& labels) {
    double u = 0.0;
    std::size_t n_pos = 0, n_neg = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] != hrv::ClassLabel::ihd) continue;
        ++n_pos;
        for (std::size_t j = 0; j < labels.size(); ++j) {
            if (labels[j] == hrv::ClassLabel::ihd) continue;
            if (scores[i] > scores[j])
                u += 1.0;
            else if (scores[i] == scores[j])
                u += 0.5;
        }
    }
    for (hrv::ClassLabel l : labels)
        if (l != hrv::ClassLabel::ihd) ++n_neg;
    return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

/// Central finite differences of the half-squared-error loss with respect
/// to every parameter of a two-layer sigmoid network.
inline hrv::Gradients fd_gradient(const hrv::Network& net, const Eigen::VectorXd& input,
                                  const Eigen::Vector2d& target, double step = 1e-5) {
    auto loss = [&](const hrv::Network& candidate) {
        auto sig = [](double z) { return 1.0 / (1.0 + std::exp(-z)); };
        Eigen::VectorXd h = candidate.w1 * input + candidate.b1;
        for (Eigen::Index i = 0; i < h.size(); ++i) h[i] = sig(h[i]);
        Eigen::VectorXd y = candidate.w2 * h + candidate.b2;
        for (Eigen::Index i = 0; i < y.size(); ++i) y[i] = sig(y[i]);
        return 0.5 * (y - Eigen::VectorXd(target)).squaredNorm();
    };

    hrv::Gradients g;
    auto probe = [&](double& param) {
        const double saved = param;
        param = saved + step;
        const double up = loss(net);
        param = saved - step;
        const double down = loss(net);
        param = saved;
        return (up - down) / (2.0 * step);
    };

    hrv::Network& mutable_net = const_cast<hrv::Network&>(net);
    g.w1.resize(net.w1.rows(), net.w1.cols());
    for (Eigen::Index r = 0; r < net.w1.rows(); ++r)
        for (Eigen::Index c = 0; c < net.w1.cols(); ++c) g.w1(r, c) = probe(mutable_net.w1(r, c));
    g.b1.resize(net.b1.size());
    for (Eigen::Index i = 0; i < net.b1.size(); ++i) g.b1[i] = probe(mutable_net.b1[i]);
    g.w2.resize(net.w2.rows(), net.w2.cols());
    for (Eigen::Index r = 0; r < net.w2.rows(); ++r)
        for (Eigen::Index c = 0; c < net.w2.cols(); ++c) g.w2(r, c) = probe(mutable_net.w2(r, c));
    g.b2.resize(net.b2.size());
    for (Eigen::Index i = 0; i < net.b2.size(); ++i) g.b2[i] = probe(mutable_net.b2[i]);
    return g;
}

/// O(n^2) reference DFT periodogram (Hamming window, mean removed, one-sided
/// density normalized by rate * sum(w^2), interior bins doubled).
inline std::vector<double> naive_periodogram(const std::vector<double>& x, double rate_hz) {
    const std::size_t n = x.size();
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(n);

    std::vector<double> w(n), xd(n);
    double wsq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        w[i] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                      static_cast<double>(n - 1));
        xd[i] = (x[i] - mean) * w[i];
        wsq += w[i] * w[i];
    }
    const std::size_t n_bins = n / 2 + 1;
    std::vector<double> psd(n_bins);
    for (std::size_t k = 0; k < n_bins; ++k) {
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t i = 0; i < n; ++i) {
            const double phi = -2.0 * std::numbers::pi * static_cast<double>(k) *
                               static_cast<double>(i) / static_cast<double>(n);
            acc += xd[i] * std::complex<double>(std::cos(phi), std::sin(phi));
        }
        double p = std::norm(acc) / (rate_hz * wsq);
        if (k != 0 && k + 1 != n_bins) p *= 2.0;
        psd[k] = p;
    }
    return psd;
}

/// Slope of the least-squares line through (x, y).
inline double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (sxy - sx * sy / n) / (sxx - sx * sx / n);
}

} // namespace oracles

#endif // HRV_TESTS_ORACLES_HPP
