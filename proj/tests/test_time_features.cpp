#include <doctest.h>

#include <vector>

#include "hrv/errors.hpp"
#include "hrv/rng.hpp"
#include "hrv/time_features.hpp"

#include "oracles.hpp"

using namespace hrv;

TEST_SUITE("time_features") {

TEST_CASE("constant segment zeroes every dispersion measure") {
    const std::vector<double> rr(100, 900.0);
    const TimeFeatures f = compute_time_features(rr);
    CHECK(f.mean_rr_ms == doctest::Approx(900.0));
    CHECK(f.sdnn_ms == 0.0);
    CHECK(f.rmssd_ms == 0.0);
    CHECK(f.nn50 == 0.0);
    CHECK(f.pnn50 == 0.0);
}

TEST_CASE("hand-computed five-beat example") {
    const std::vector<double> rr{800, 850, 790, 860, 795};
    const TimeFeatures f = compute_time_features(rr);
    CHECK(f.mean_rr_ms == doctest::Approx(819.0));
    CHECK(f.sdnn_ms == doctest::Approx(33.2415).epsilon(1e-4));
    CHECK(f.rmssd_ms == doctest::Approx(61.6948).epsilon(1e-4));
    // diffs {50, -60, 70, -65}: the 50 does not count (strict inequality)
    CHECK(f.nn50 == 3.0);
    CHECK(f.pnn50 == doctest::Approx(75.0));
}

TEST_CASE("strict threshold: |d| == 50 does not count") {
    const std::vector<double> rr{800, 850, 800, 850};
    const TimeFeatures f = compute_time_features(rr);
    CHECK(f.nn50 == 0.0);
    // diffs {+51, -50, +49}: only the first one counts
    const std::vector<double> rr2{800, 851, 801, 850};
    CHECK(compute_time_features(rr2).nn50 == 1.0);
}

TEST_CASE("matches the brute-force oracle on random segments") {
    Rng rng(42);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> rr(350);
        for (double& v : rr) v = 800.0 + 120.0 * rng.normal();
        const TimeFeatures f = compute_time_features(rr);
        const oracles::TimeRef ref = oracles::time_features(rr);
        CHECK(f.mean_rr_ms == doctest::Approx(ref.mean).epsilon(1e-9));
        CHECK(f.sdnn_ms == doctest::Approx(ref.sdnn).epsilon(1e-9));
        CHECK(f.rmssd_ms == doctest::Approx(ref.rmssd).epsilon(1e-9));
        CHECK(f.nn50 == ref.nn50);
        CHECK(f.pnn50 == doctest::Approx(ref.pnn50).epsilon(1e-9));
    }
}

TEST_CASE("shift invariance") {
    Rng rng(7);
    std::vector<double> rr(120), shifted(120);
    for (std::size_t i = 0; i < rr.size(); ++i) {
        rr[i] = 850.0 + 60.0 * rng.normal();
        shifted[i] = rr[i] + 250.0;
    }
    const TimeFeatures a = compute_time_features(rr);
    const TimeFeatures b = compute_time_features(shifted);
    CHECK(b.mean_rr_ms == doctest::Approx(a.mean_rr_ms + 250.0).epsilon(1e-12));
    CHECK(b.sdnn_ms == doctest::Approx(a.sdnn_ms).epsilon(1e-12));
    CHECK(b.rmssd_ms == doctest::Approx(a.rmssd_ms).epsilon(1e-12));
    CHECK(b.nn50 == a.nn50);
    CHECK(b.pnn50 == a.pnn50);
}

TEST_CASE("scale covariance") {
    Rng rng(8);
    std::vector<double> rr(120), scaled(120);
    for (std::size_t i = 0; i < rr.size(); ++i) {
        rr[i] = 850.0 + 60.0 * rng.normal();
        scaled[i] = 1.5 * rr[i];
    }
    const TimeFeatures a = compute_time_features(rr);
    const TimeFeatures b = compute_time_features(scaled);
    CHECK(b.mean_rr_ms == doctest::Approx(1.5 * a.mean_rr_ms).epsilon(1e-12));
    CHECK(b.sdnn_ms == doctest::Approx(1.5 * a.sdnn_ms).epsilon(1e-12));
    CHECK(b.rmssd_ms == doctest::Approx(1.5 * a.rmssd_ms).epsilon(1e-12));
}

TEST_CASE("too short input") {
    CHECK_THROWS_AS(compute_time_features(std::vector<double>{800.0}), TooShortError);
}

} // TEST_SUITE
