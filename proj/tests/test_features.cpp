#include <doctest.h>

#include "hrv/features.hpp"
#include "hrv/rng.hpp"

using namespace hrv;

namespace {

SegmentFeatures full_segment(double value) {
    SegmentFeatures f;
    for (std::size_t c = 0; c < kFeatureCount; ++c) f[c] = value;
    return f;
}

Eigen::MatrixXd random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    Rng rng(seed);
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            m(r, c) = 10.0 * static_cast<double>(c + 1) + 3.0 * rng.normal();
    return m;
}

} // namespace

TEST_SUITE("feature_assembly") {

TEST_CASE("single segment passes through, demographics appended") {
    const FeatureVector v = average_subject_features({full_segment(5.0)}, 64, Gender::male);
    for (std::size_t c = 0; c < kAge; ++c) CHECK(v[c] == 5.0);
    CHECK(v[kAge] == 64.0);
    CHECK(v[kGender] == 1.0);
    const FeatureVector w = average_subject_features({full_segment(5.0)}, 30, Gender::female);
    CHECK(w[kGender] == 0.0);
}

TEST_CASE("two segments average per component") {
    SegmentFeatures a = full_segment(1.0);
    SegmentFeatures b = full_segment(2.0);
    a[kMeanRr] = 800.0;
    b[kMeanRr] = 900.0;
    const FeatureVector v = average_subject_features({a, b}, 50, Gender::female);
    CHECK(v[kMeanRr] == doctest::Approx(850.0));
    CHECK(v[kSdnn] == doctest::Approx(1.5));
}

TEST_CASE("missing entries are skipped by the mean") {
    std::vector<SegmentFeatures> segments(5, full_segment(10.0));
    segments[1][kBeta].reset();
    segments[3][kBeta].reset();
    segments[4][kBeta] = 20.0;
    const FeatureVector v = average_subject_features(segments, 40, Gender::male);
    CHECK(v[kBeta] == doctest::Approx((10.0 + 10.0 + 20.0) / 3.0));
}

TEST_CASE("a component missing everywhere invalidates the subject") {
    std::vector<SegmentFeatures> segments(3, full_segment(10.0));
    for (auto& s : segments) s[kLfHf].reset();
    CHECK_THROWS_AS(average_subject_features(segments, 40, Gender::male), SchemaError);
}

TEST_CASE("no segments") {
    CHECK_THROWS_AS(average_subject_features({}, 40, Gender::male), NoSegmentsError);
}

} // TEST_SUITE

TEST_SUITE("standardize") {

TEST_CASE("fit on all rows gives zero mean and unit sd") {
    const Eigen::MatrixXd m = random_matrix(200, 5, 3);
    auto [z, stats] = standardize(m, {});
    for (Eigen::Index c = 0; c < z.cols(); ++c) {
        CHECK(z.col(c).mean() == doctest::Approx(0.0).epsilon(1e-9));
        const double sd = std::sqrt(z.col(c).squaredNorm() / (static_cast<double>(z.rows()) - 1.0) -
                                    0.0);
        CHECK(sd == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("transform is fit on the designated rows only") {
    Eigen::MatrixXd m(4, 1);
    m << 1.0, 3.0, 100.0, -50.0;
    auto stats = fit_column_stats(m, {0, 1});
    CHECK(stats.mean[0] == doctest::Approx(2.0));
    const Eigen::MatrixXd z = stats.apply(m);
    CHECK(z(0, 0) == doctest::Approx(-z(1, 0)));
    CHECK(std::isfinite(z(2, 0))); // out-of-range rows are not clipped
    CHECK(z(2, 0) > 3.0);
}

TEST_CASE("constant column is named in the error") {
    Eigen::MatrixXd m = random_matrix(50, kFeatureCount, 9);
    m.col(kGender).setConstant(1.0);
    try {
        standardize(m, {});
        FAIL("expected ConstantFeatureError");
    } catch (const ConstantFeatureError& e) {
        CHECK(std::string(e.what()).find("gender") != std::string::npos);
    }
}

TEST_CASE("standardizing a standardized matrix is the identity transform") {
    const Eigen::MatrixXd m = random_matrix(120, 4, 17);
    auto [z1, s1] = standardize(m, {});
    auto [z2, s2] = standardize(z1, {});
    for (Eigen::Index r = 0; r < z1.rows(); ++r)
        for (Eigen::Index c = 0; c < z1.cols(); ++c)
            CHECK(z2(r, c) == doctest::Approx(z1(r, c)).epsilon(1e-12));
}

} // TEST_SUITE
