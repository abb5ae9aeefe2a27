#include <doctest.h>

#include <filesystem>

#include "hrv/rng.hpp"
#include "hrv/schemes.hpp"

using namespace hrv;

namespace {

Eigen::MatrixXd gaussian_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    Rng rng(seed);
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = rng.normal();
    return m;
}

/// Data whose sample covariance is exactly diag(eigenvalues): orthonormalize
/// centered Gaussian columns, then scale each by sqrt(lambda * (n-1)).
Eigen::MatrixXd matrix_with_covariance(const std::vector<double>& eigenvalues, std::size_t rows,
                                       std::uint64_t seed) {
    const auto cols = static_cast<Eigen::Index>(eigenvalues.size());
    Eigen::MatrixXd g = gaussian_matrix(rows, eigenvalues.size(), seed);
    g.rowwise() -= g.colwise().mean();
    // Gram-Schmidt against the all-ones direction is implicit in centering;
    // orthonormalize the columns against each other.
    for (Eigen::Index c = 0; c < cols; ++c) {
        for (Eigen::Index p = 0; p < c; ++p)
            g.col(c) -= g.col(p).dot(g.col(c)) * g.col(p);
        g.col(c) /= g.col(c).norm();
    }
    Eigen::MatrixXd m(g.rows(), cols);
    for (Eigen::Index c = 0; c < cols; ++c)
        m.col(c) = g.col(c) * std::sqrt(eigenvalues[static_cast<std::size_t>(c)] *
                                        (static_cast<double>(rows) - 1.0));
    return m;
}

} // namespace

TEST_SUITE("pca") {

TEST_CASE("constant column collapses to one explanatory component") {
    Eigen::MatrixXd m(40, 2);
    Rng rng(1);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        m(r, 0) = rng.normal();
        m(r, 1) = 3.0; // bypasses the standardization guard on purpose
    }
    const InputScheme scheme = pca_fit(m);
    CHECK(scheme.dimension() == 1);
    CHECK(scheme.explained[0] == doctest::Approx(1.0));
    CHECK_FALSE(scheme.warnings.empty());
}

TEST_CASE("isotropic cloud needs every component") {
    const Eigen::MatrixXd m = gaussian_matrix(6000, 3, 2);
    const InputScheme scheme = pca_fit(m);
    CHECK(scheme.dimension() == 3);
    for (Eigen::Index j = 0; j < 3; ++j)
        CHECK(scheme.explained[j] == doctest::Approx(1.0 / 3.0).epsilon(0.12));
}

TEST_CASE("constructed eigenvalues select the analytically known k") {
    const Eigen::MatrixXd m = matrix_with_covariance({0.6, 0.35, 0.05}, 400, 3);
    const InputScheme scheme = pca_fit(m);
    CHECK(scheme.dimension() == 2);
    CHECK(scheme.eigenvalues[0] == doctest::Approx(0.6).epsilon(1e-9));
    CHECK(scheme.eigenvalues[1] == doctest::Approx(0.35).epsilon(1e-9));
    CHECK(scheme.cumulative_explained == doctest::Approx(0.95).epsilon(1e-9));

    PcaParams strict;
    strict.variance_target = 0.96;
    CHECK(pca_fit(m, strict).dimension() == 3);
}

TEST_CASE("basis is orthonormal and ratios are sorted and sum to one") {
    const Eigen::MatrixXd m = gaussian_matrix(300, 17, 4);
    const InputScheme scheme = pca_fit(m);
    const Eigen::MatrixXd gram = scheme.basis.transpose() * scheme.basis;
    const Eigen::MatrixXd eye =
        Eigen::MatrixXd::Identity(scheme.basis.cols(), scheme.basis.cols());
    CHECK((gram - eye).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(scheme.explained.sum() == doctest::Approx(1.0).epsilon(1e-9));
    for (Eigen::Index j = 1; j < scheme.explained.size(); ++j)
        CHECK(scheme.explained[j] <= scheme.explained[j - 1]);
}

TEST_CASE("projection round-trips with a full basis and the eigenvalue variance holds") {
    const Eigen::MatrixXd m = matrix_with_covariance({0.5, 0.3, 0.15, 0.05}, 300, 5);
    PcaParams keep_all;
    keep_all.variance_target = 1.0;
    const InputScheme scheme = pca_fit(m, keep_all);
    REQUIRE(scheme.dimension() == 4);

    Eigen::RowVectorXd mean = m.colwise().mean();
    for (Eigen::Index r = 0; r < 20; ++r) {
        const Eigen::VectorXd row = m.row(r).transpose();
        const Eigen::VectorXd projected = pca_transform(scheme, row);
        const Eigen::VectorXd back = scheme.basis * projected;
        for (Eigen::Index c = 0; c < row.size(); ++c)
            CHECK(back[c] == doctest::Approx(row[c]).epsilon(1e-9));
    }
    CHECK(pca_transform(scheme, Eigen::VectorXd::Zero(4)).norm() == doctest::Approx(0.0));

    // variance of the fit rows along component j equals eigenvalue j
    Eigen::MatrixXd centered = m.rowwise() - mean;
    const Eigen::MatrixXd scores = centered * scheme.basis;
    for (Eigen::Index j = 0; j < scores.cols(); ++j) {
        const double var = scores.col(j).squaredNorm() / (static_cast<double>(m.rows()) - 1.0);
        CHECK(var == doctest::Approx(scheme.eigenvalues[j]).epsilon(1e-9));
    }
}

TEST_CASE("rows must cover columns") {
    CHECK_THROWS_AS(pca_fit(gaussian_matrix(10, 17, 6)), ShapeError);
}

} // TEST_SUITE

TEST_SUITE("stepwise") {

TEST_CASE("label equal to one feature selects exactly that feature") {
    const Eigen::MatrixXd m = gaussian_matrix(300, 17, 12);
    const Eigen::VectorXd target = m.col(3);
    const InputScheme scheme = stepwise_select_numeric(m, target);
    REQUIRE(scheme.selected.size() == 1);
    CHECK(scheme.selected[0] == 3);
    CHECK(scheme.dimension() == 1);
    CHECK(scheme.input_names() == std::vector<std::string>{"nn50"});
}

TEST_CASE("strong planted signal is recovered") {
    Rng rng(5);
    const Eigen::MatrixXd m = gaussian_matrix(500, 10, 13);
    Eigen::VectorXd y = 2.0 * m.col(1) - 1.5 * m.col(4) + 0.8 * m.col(7);
    for (Eigen::Index i = 0; i < y.size(); ++i) y[i] += 0.3 * rng.normal();
    const InputScheme scheme = stepwise_select_numeric(m, y);
    std::vector<std::size_t> sorted = scheme.selected;
    std::sort(sorted.begin(), sorted.end());
    REQUIRE(sorted.size() >= 3);
    CHECK(std::find(sorted.begin(), sorted.end(), 1u) != sorted.end());
    CHECK(std::find(sorted.begin(), sorted.end(), 4u) != sorted.end());
    CHECK(std::find(sorted.begin(), sorted.end(), 7u) != sorted.end());
}

TEST_CASE("independent labels mostly select nothing") {
    // Null model: P(empty) = 0.95^17 ~= 0.42, mean selected ~= 17 * 0.05.
    std::size_t empties = 0;
    std::size_t selected_total = 0;
    const int trials = 100;
    for (int t = 0; t < trials; ++t) {
        const Eigen::MatrixXd m = gaussian_matrix(200, 17, 1000 + static_cast<std::uint64_t>(t));
        Rng rng(2000 + static_cast<std::uint64_t>(t));
        std::vector<ClassLabel> labels(200);
        for (auto& l : labels)
            l = rng.bernoulli(0.3) ? ClassLabel::ihd : ClassLabel::normal;
        try {
            selected_total += stepwise_select(m, labels).selected.size();
        } catch (const EmptySelectionError&) {
            ++empties;
        }
    }
    CHECK(empties > 25);
    CHECK(empties < 60);
    const double mean_selected = static_cast<double>(selected_total) / trials;
    CHECK(mean_selected > 0.3);
    CHECK(mean_selected < 1.7);
}

TEST_CASE("selection is deterministic") {
    const Eigen::MatrixXd m = gaussian_matrix(300, 17, 21);
    Rng rng(22);
    Eigen::VectorXd y = m.col(0) + 0.5 * m.col(5);
    for (Eigen::Index i = 0; i < y.size(); ++i) y[i] += 0.2 * rng.normal();
    const InputScheme a = stepwise_select_numeric(m, y);
    const InputScheme b = stepwise_select_numeric(m, y);
    CHECK(a.selected == b.selected);
}

TEST_CASE("shape preconditions") {
    const Eigen::MatrixXd m = gaussian_matrix(18, 17, 30);
    Eigen::VectorXd y = m.col(0);
    CHECK_THROWS_AS(stepwise_select_numeric(m, y), ShapeError);
}

} // TEST_SUITE

TEST_SUITE("scheme_io") {

TEST_CASE("pca scheme round-trips through its file form") {
    const Eigen::MatrixXd m = gaussian_matrix(100, 4, 40);
    auto [z, stats] = standardize(m, {});
    const InputScheme scheme = pca_fit(z, {}, &stats);

    const auto path = std::filesystem::temp_directory_path() / "hrv_scheme_rt.json";
    save_scheme(path, scheme);
    const InputScheme loaded = load_scheme(path);
    CHECK(loaded.kind == SchemeKind::pca);
    CHECK(loaded.dimension() == scheme.dimension());
    CHECK((loaded.basis - scheme.basis).cwiseAbs().maxCoeff() == 0.0);
    CHECK((loaded.pca_stats.mean - scheme.pca_stats.mean).cwiseAbs().maxCoeff() == 0.0);

    FeatureVector row{};
    for (std::size_t i = 0; i < kFeatureCount; ++i) row[i] = static_cast<double>(i);
    // a 4-column scheme cannot transform 17-wide rows
    CHECK_THROWS_AS(scheme.transform(row), ShapeError);
}

TEST_CASE("stepwise and all schemes round-trip and transform") {
    InputScheme stepwise;
    stepwise.kind = SchemeKind::stepwise;
    stepwise.selected = {kMeanRr, kLfn, kSd1, kGender, kAge};
    const auto path = std::filesystem::temp_directory_path() / "hrv_scheme_sw.json";
    save_scheme(path, stepwise);
    const InputScheme loaded = load_scheme(path);
    CHECK(loaded.selected == stepwise.selected);

    FeatureVector row{};
    for (std::size_t i = 0; i < kFeatureCount; ++i) row[i] = 100.0 + static_cast<double>(i);
    const Eigen::VectorXd out = loaded.transform(row);
    REQUIRE(out.size() == 5);
    CHECK(out[0] == row[kMeanRr]);
    CHECK(out[4] == row[kAge]);

    const Eigen::VectorXd all = all_features_scheme().transform(row);
    CHECK(all.size() == static_cast<Eigen::Index>(kFeatureCount));
    CHECK(all[16] == row[16]);
}

} // TEST_SUITE
