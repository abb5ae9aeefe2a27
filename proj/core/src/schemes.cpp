#include "hrv/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include <boost/math/distributions/students_t.hpp>
#include <json.hpp>

#include "hrv/errors.hpp"

namespace hrv {

namespace {

using nlohmann::json;

struct OlsFit {
    Eigen::VectorXd coef;    // [intercept, included...]
    Eigen::VectorXd p_value; // aligned with coef
    bool ok = false;         // false when the design is rank-deficient
};

/// OLS with intercept and two-sided t-test p-values per coefficient.
OlsFit ols_with_pvalues(const Eigen::MatrixXd& m, const std::vector<std::size_t>& cols,
                        const Eigen::VectorXd& y) {
    const Eigen::Index n = m.rows();
    const Eigen::Index p = static_cast<Eigen::Index>(cols.size()) + 1;

    OlsFit fit;
    if (n <= p) return fit;

    Eigen::MatrixXd x(n, p);
    x.col(0).setOnes();
    for (std::size_t j = 0; j < cols.size(); ++j)
        x.col(static_cast<Eigen::Index>(j) + 1) = m.col(static_cast<Eigen::Index>(cols[j]));

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    if (qr.rank() < p) return fit;

    fit.coef = qr.solve(y);
    const Eigen::VectorXd residual = y - x * fit.coef;
    const double dof = static_cast<double>(n - p);
    const double sigma2 = residual.squaredNorm() / dof;

    fit.p_value.resize(p);

    // Residual at machine-precision zero: the model interpolates y, so a
    // coefficient is either exactly needed (p -> 0) or pure noise (p -> 1).
    const double y_scale = y.squaredNorm() / static_cast<double>(n) + 1.0;
    if (sigma2 < 1e-24 * y_scale) {
        const double coef_scale = fit.coef.cwiseAbs().maxCoeff() + 1.0;
        for (Eigen::Index j = 0; j < p; ++j)
            fit.p_value[j] = std::abs(fit.coef[j]) > 1e-9 * coef_scale ? 0.0 : 1.0;
        fit.ok = true;
        return fit;
    }

    const Eigen::MatrixXd xtx_inv =
        (x.transpose() * x).ldlt().solve(Eigen::MatrixXd::Identity(p, p));

    const boost::math::students_t dist(dof);
    for (Eigen::Index j = 0; j < p; ++j) {
        const double se = std::sqrt(std::max(0.0, sigma2 * xtx_inv(j, j)));
        if (!(se > 0.0)) {
            fit.p_value[j] = 0.0;
            continue;
        }
        const double t = fit.coef[j] / se;
        fit.p_value[j] = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
    }
    fit.ok = true;
    return fit;
}

json vector_to_json(const Eigen::VectorXd& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

Eigen::VectorXd vector_from_json(const json& a) {
    Eigen::VectorXd v(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) v[static_cast<Eigen::Index>(i)] = a[i].get<double>();
    return v;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const json& rows) {
    if (rows.empty()) return {};
    Eigen::MatrixXd m(rows.size(), rows[0].size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows[r].size(); ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                rows[r][c].get<double>();
    return m;
}

} // namespace

const char* to_string(SchemeKind k) {
    switch (k) {
        case SchemeKind::pca: return "pca";
        case SchemeKind::stepwise: return "stepwise";
        case SchemeKind::all: return "all";
    }
    return "all";
}

SchemeKind scheme_kind_from_string(const std::string& s) {
    if (s == "pca") return SchemeKind::pca;
    if (s == "stepwise") return SchemeKind::stepwise;
    if (s == "all") return SchemeKind::all;
    throw ConfigError("unknown scheme '" + s + "' (expected pca|stepwise|all)");
}

std::size_t InputScheme::dimension() const {
    switch (kind) {
        case SchemeKind::pca: return static_cast<std::size_t>(basis.cols());
        case SchemeKind::stepwise: return selected.size();
        case SchemeKind::all: return kFeatureCount;
    }
    return kFeatureCount;
}

std::vector<std::string> InputScheme::input_names() const {
    std::vector<std::string> names;
    switch (kind) {
        case SchemeKind::pca:
            for (std::size_t i = 0; i < dimension(); ++i)
                names.push_back("pc" + std::to_string(i + 1));
            break;
        case SchemeKind::stepwise:
            for (std::size_t c : selected) names.emplace_back(kFeatureNames[c]);
            break;
        case SchemeKind::all:
            names.assign(kFeatureNames.begin(), kFeatureNames.end());
            break;
    }
    return names;
}

Eigen::VectorXd InputScheme::transform(const FeatureVector& row) const {
    Eigen::VectorXd v(kFeatureCount);
    for (std::size_t i = 0; i < kFeatureCount; ++i) v[static_cast<Eigen::Index>(i)] = row[i];
    switch (kind) {
        case SchemeKind::pca: return pca_transform(*this, pca_stats.apply(v));
        case SchemeKind::stepwise: {
            Eigen::VectorXd out(selected.size());
            for (std::size_t j = 0; j < selected.size(); ++j)
                out[static_cast<Eigen::Index>(j)] = v[static_cast<Eigen::Index>(selected[j])];
            return out;
        }
        case SchemeKind::all: return v;
    }
    return v;
}

Eigen::MatrixXd InputScheme::transform(const Eigen::MatrixXd& rows) const {
    if (rows.cols() != static_cast<Eigen::Index>(kFeatureCount))
        throw ShapeError("scheme transform expects 17 columns");
    Eigen::MatrixXd out(rows.rows(), static_cast<Eigen::Index>(dimension()));
    for (Eigen::Index r = 0; r < rows.rows(); ++r) {
        FeatureVector fv{};
        for (std::size_t c = 0; c < kFeatureCount; ++c)
            fv[c] = rows(r, static_cast<Eigen::Index>(c));
        out.row(r) = transform(fv).transpose();
    }
    return out;
}

InputScheme pca_fit(const Eigen::MatrixXd& standardized, const PcaParams& params,
                    const ColumnStats* stats) {
    const Eigen::Index n = standardized.rows();
    const Eigen::Index d = standardized.cols();
    if (n < d) throw ShapeError("pca needs at least as many rows as columns");

    Eigen::RowVectorXd mean = standardized.colwise().mean();
    Eigen::MatrixXd centered = standardized.rowwise() - mean;
    Eigen::MatrixXd cov =
        centered.transpose() * centered / static_cast<double>(n - 1);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    if (solver.info() != Eigen::Success) throw Error("pca eigen-decomposition failed");

    // Ascending from Eigen; flip to descending and drop non-positive modes.
    Eigen::VectorXd evals_asc = solver.eigenvalues();
    Eigen::MatrixXd evecs_asc = solver.eigenvectors();
    const double tol = std::max(evals_asc.cwiseAbs().maxCoeff(), 1.0) *
                       std::numeric_limits<double>::epsilon() * static_cast<double>(d);

    InputScheme scheme;
    scheme.kind = SchemeKind::pca;
    if (stats) scheme.pca_stats = *stats;

    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = d - 1; i >= 0; --i)
        if (evals_asc[i] > tol) keep.push_back(i);
    if (keep.empty()) throw Error("pca: covariance has no positive eigenvalues");
    if (static_cast<Eigen::Index>(keep.size()) < d)
        scheme.warnings.push_back("covariance is rank-deficient; reduced to " +
                                  std::to_string(keep.size()) + " positive modes");

    const Eigen::Index r = static_cast<Eigen::Index>(keep.size());
    Eigen::VectorXd evals(r);
    Eigen::MatrixXd evecs(d, r);
    for (Eigen::Index j = 0; j < r; ++j) {
        evals[j] = evals_asc[keep[static_cast<std::size_t>(j)]];
        Eigen::VectorXd v = evecs_asc.col(keep[static_cast<std::size_t>(j)]);
        // Deterministic orientation: largest-magnitude loading positive.
        Eigen::Index imax = 0;
        v.cwiseAbs().maxCoeff(&imax);
        if (v[imax] < 0.0) v = -v;
        evecs.col(j) = v;
    }

    const double total = evals.sum();
    Eigen::VectorXd ratios = evals / total;

    Eigen::Index k = r;
    double cum = 0.0;
    for (Eigen::Index j = 0; j < r; ++j) {
        cum += ratios[j];
        if (cum >= params.variance_target - 1e-12) {
            k = j + 1;
            break;
        }
    }
    double cum_k = 0.0;
    for (Eigen::Index j = 0; j < k; ++j) cum_k += ratios[j];

    scheme.basis = evecs.leftCols(k);
    scheme.eigenvalues = evals;
    scheme.explained = ratios;
    scheme.cumulative_explained = cum_k;
    return scheme;
}

Eigen::VectorXd pca_transform(const InputScheme& scheme, const Eigen::VectorXd& standardized_row) {
    if (scheme.kind != SchemeKind::pca) throw ConfigError("scheme is not pca");
    if (standardized_row.size() != scheme.basis.rows())
        throw ShapeError("pca transform dimension mismatch");
    return scheme.basis.transpose() * standardized_row;
}

InputScheme stepwise_select_numeric(const Eigen::MatrixXd& m, const Eigen::VectorXd& target,
                                    const StepwiseParams& params) {
    const Eigen::Index n = m.rows();
    const Eigen::Index d = m.cols();
    if (target.size() != n) throw ShapeError("stepwise target length mismatch");
    if (n <= d + 2) throw ShapeError("stepwise needs rows > columns + 2");

    std::vector<std::size_t> selected;
    std::vector<bool> in_model(static_cast<std::size_t>(d), false);

    const std::size_t max_steps = 50 * static_cast<std::size_t>(d) + 50;
    for (std::size_t step = 0; step < max_steps; ++step) {
        bool changed = false;

        // Forward: best candidate by entry p-value, column order breaking ties.
        double best_p = params.entry_p;
        std::ptrdiff_t best_col = -1;
        for (std::size_t c = 0; c < static_cast<std::size_t>(d); ++c) {
            if (in_model[c]) continue;
            std::vector<std::size_t> cols = selected;
            cols.push_back(c);
            OlsFit fit = ols_with_pvalues(m, cols, target);
            if (!fit.ok) continue; // candidate is collinear with the model
            const double p = fit.p_value[fit.p_value.size() - 1];
            if (p < best_p) {
                best_p = p;
                best_col = static_cast<std::ptrdiff_t>(c);
            }
        }
        if (best_col >= 0) {
            selected.push_back(static_cast<std::size_t>(best_col));
            in_model[static_cast<std::size_t>(best_col)] = true;
            changed = true;
        }

        // Backward: drop the worst included feature while any reaches removal_p.
        while (!selected.empty()) {
            OlsFit fit = ols_with_pvalues(m, selected, target);
            if (!fit.ok) throw Error("stepwise: selected design became rank-deficient");
            double worst_p = -1.0;
            std::ptrdiff_t worst_idx = -1;
            for (std::size_t j = 0; j < selected.size(); ++j) {
                const double p = fit.p_value[static_cast<Eigen::Index>(j) + 1];
                if (p >= params.removal_p && p > worst_p) {
                    worst_p = p;
                    worst_idx = static_cast<std::ptrdiff_t>(j);
                }
            }
            if (worst_idx < 0) break;
            in_model[selected[static_cast<std::size_t>(worst_idx)]] = false;
            selected.erase(selected.begin() + worst_idx);
            changed = true;
        }

        if (!changed) break;
    }

    if (selected.empty())
        throw EmptySelectionError("no feature reached the entry p-value " +
                                  std::to_string(params.entry_p));

    InputScheme scheme;
    scheme.kind = SchemeKind::stepwise;
    scheme.selected = std::move(selected);
    return scheme;
}

InputScheme stepwise_select(const Eigen::MatrixXd& standardized,
                            const std::vector<ClassLabel>& labels,
                            const StepwiseParams& params) {
    if (static_cast<Eigen::Index>(labels.size()) != standardized.rows())
        throw ShapeError("stepwise labels length mismatch");
    Eigen::VectorXd y(standardized.rows());
    for (Eigen::Index i = 0; i < y.size(); ++i)
        y[i] = labels[static_cast<std::size_t>(i)] == ClassLabel::ihd ? 1.0 : 0.0;
    return stepwise_select_numeric(standardized, y, params);
}

InputScheme all_features_scheme() {
    InputScheme scheme;
    scheme.kind = SchemeKind::all;
    return scheme;
}

std::string scheme_to_json_string(const InputScheme& scheme) {
    json j;
    j["format_version"] = 1;
    j["kind"] = to_string(scheme.kind);
    j["input_names"] = scheme.input_names();
    if (scheme.kind == SchemeKind::pca) {
        j["standardization"] = {{"mean", vector_to_json(scheme.pca_stats.mean)},
                                {"sd", vector_to_json(scheme.pca_stats.sd)}};
        j["basis"] = matrix_to_json(scheme.basis);
        j["eigenvalues"] = vector_to_json(scheme.eigenvalues);
        j["explained_variance_ratio"] = vector_to_json(scheme.explained);
        j["cumulative_explained"] = scheme.cumulative_explained;
    } else if (scheme.kind == SchemeKind::stepwise) {
        j["selected_columns"] = scheme.selected;
    }
    return j.dump(2);
}

InputScheme scheme_from_json_string(const std::string& text) {
    json j = json::parse(text, nullptr, true, true);
    if (j.value("format_version", 0) != 1)
        throw SchemaError("unsupported scheme payload version");

    InputScheme scheme;
    scheme.kind = scheme_kind_from_string(j.at("kind").get<std::string>());
    if (scheme.kind == SchemeKind::pca) {
        scheme.pca_stats.mean = vector_from_json(j.at("standardization").at("mean"));
        scheme.pca_stats.sd = vector_from_json(j.at("standardization").at("sd"));
        scheme.basis = matrix_from_json(j.at("basis"));
        scheme.eigenvalues = vector_from_json(j.at("eigenvalues"));
        scheme.explained = vector_from_json(j.at("explained_variance_ratio"));
        scheme.cumulative_explained = j.at("cumulative_explained").get<double>();
    } else if (scheme.kind == SchemeKind::stepwise) {
        scheme.selected = j.at("selected_columns").get<std::vector<std::size_t>>();
        if (scheme.selected.empty()) throw SchemaError("stepwise scheme with empty selection");
    }
    return scheme;
}

void save_scheme(const std::filesystem::path& path, const InputScheme& scheme) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << scheme_to_json_string(scheme) << '\n';
}

InputScheme load_scheme(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return scheme_from_json_string(text);
}

} // namespace hrv
