#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "hrv/ingest.hpp"
#include "hrv/pipeline.hpp"
#include "hrv/preprocess.hpp"
#include "hrv/spectral.hpp"
#include "hrv/synth.hpp"

#include "oracles.hpp"

using namespace hrv;
namespace fs = std::filesystem;

TEST_SUITE("synth") {

TEST_CASE("quiet profile produces a constant series of the right length") {
    RrProfile p;
    p.base_rr_ms = 800.0;
    p.lf_amp_ms = 0.0;
    p.hf_amp_ms = 0.0;
    p.noise_sd_ms = 0.0;
    p.duration_s = 600.0;
    auto [series, truth] = gen_rr_series(p, 1);
    for (double v : series.intervals_ms) CHECK(v == 800.0);
    CHECK(series.duration_s() >= 600.0);
    CHECK(series.duration_s() < 600.0 + 0.801);
    CHECK(truth.artifact_indices.empty());
}

TEST_CASE("generation is deterministic in the seed") {
    RrProfile p;
    p.duration_s = 400.0;
    p.noise_sd_ms = 30.0;
    p.artifact_rate = 0.02;
    auto [a, ta] = gen_rr_series(p, 42);
    auto [b, tb] = gen_rr_series(p, 42);
    CHECK(a.intervals_ms == b.intervals_ms);
    CHECK(ta.artifact_indices == tb.artifact_indices);
    auto [c, tc] = gen_rr_series(p, 43);
    CHECK(a.intervals_ms != c.intervals_ms);
}

TEST_CASE("generated series pass ingest validation") {
    RrProfile p;
    p.duration_s = 900.0;
    p.noise_sd_ms = 50.0;
    p.artifact_rate = 0.05;
    auto [series, truth] = gen_rr_series(p, 9);
    const RRSeries parsed = parse_rr_file(serialize_rr(series));
    CHECK(parsed.size() == series.size());
    for (std::size_t i = 1; i < series.beat_times_s.size(); ++i)
        CHECK(series.beat_times_s[i] > series.beat_times_s[i - 1]);
}

TEST_CASE("injection rate matches the configured artifact rate") {
    RrProfile p;
    p.duration_s = 43200.0; // half a day, ~50k beats
    p.noise_sd_ms = 10.0;
    p.artifact_rate = 0.03;
    auto [series, truth] = gen_rr_series(p, 17);
    const double fraction = static_cast<double>(truth.artifact_indices.size()) /
                            static_cast<double>(series.size());
    CHECK(fraction == doctest::Approx(0.03).epsilon(0.17)); // 0.03 +- 0.005
    // spikes are isolated: no two injected indices are adjacent
    for (std::size_t i = 1; i < truth.artifact_indices.size(); ++i)
        CHECK(truth.artifact_indices[i] - truth.artifact_indices[i - 1] >= 3);
}

TEST_CASE("lf-only profile concentrates band power on every segment") {
    RrProfile p;
    p.duration_s = 1500.0;
    p.base_rr_ms = 850.0;
    p.lf_amp_ms = 50.0;
    p.hf_amp_ms = 0.0;
    p.noise_sd_ms = 1.0;
    auto [series, truth] = gen_rr_series(p, 23);
    const CleanSeries clean =
        correct_artifacts(series, std::vector<bool>(series.size(), false));
    const UniformTachogram uniform = resample_uniform(clean);
    const auto segments = segment_series(clean, uniform);
    REQUIRE(segments.size() == 5);
    for (const Segment& seg : segments) {
        const BandPowers bp = band_powers(periodogram_psd(seg.uniform_slice_ms));
        CHECK(bp.lfn > 0.95);
    }

    p.lf_amp_ms = 0.0;
    p.hf_amp_ms = 50.0;
    auto [series2, truth2] = gen_rr_series(p, 24);
    const CleanSeries clean2 =
        correct_artifacts(series2, std::vector<bool>(series2.size(), false));
    const auto segments2 = segment_series(clean2, resample_uniform(clean2));
    for (const Segment& seg : segments2) {
        const BandPowers bp = band_powers(periodogram_psd(seg.uniform_slice_ms));
        CHECK(bp.hfn > 0.95);
    }
}

TEST_CASE("shaped noise has the requested sd and spectral slope") {
    const auto x = shaped_noise(4096, 0.5, -1.0, 25.0, 7);
    CHECK(std::sqrt(oracles::population_variance(x)) == doctest::Approx(25.0).epsilon(1e-9));

    // fit ln(psd) over ln(f) with the reference periodogram machinery
    const auto psd = oracles::naive_periodogram(std::vector<double>(x.begin(), x.begin() + 600),
                                                2.0);
    std::vector<double> lx, ly;
    for (std::size_t k = 1; k < psd.size(); ++k) {
        if (psd[k] <= 0.0) continue;
        lx.push_back(std::log(static_cast<double>(k)));
        ly.push_back(std::log(psd[k]));
    }
    CHECK(oracles::ols_slope(lx, ly) == doctest::Approx(-1.0).epsilon(0.45));
}

TEST_CASE("cohort generation is deterministic and correctly labeled") {
    CohortSpec spec;
    spec.n_normal = 6;
    spec.n_ihd = 4;
    spec.normal.profile.duration_s = 300.0;
    spec.ihd.profile.duration_s = 300.0;
    spec.master_seed = 5;
    const SynthCohort a = gen_cohort(spec);
    const SynthCohort b = gen_cohort(spec);
    REQUIRE(a.cohort.subjects.size() == 10);
    CHECK(a.cohort.count(ClassLabel::normal) == 6);
    CHECK(a.cohort.count(ClassLabel::ihd) == 4);
    for (std::size_t i = 0; i < a.cohort.subjects.size(); ++i) {
        CHECK(a.cohort.subjects[i].rr.intervals_ms == b.cohort.subjects[i].rr.intervals_ms);
        CHECK(a.cohort.subjects[i].age == b.cohort.subjects[i].age);
    }
    // per-subject jitter actually varies the profiles
    CHECK(a.truths[0].profile.base_rr_ms != a.truths[1].profile.base_rr_ms);
}

TEST_CASE("written cohort round-trips through the ingest path") {
    const fs::path dir = fs::temp_directory_path() / "hrv_test_synth_rt";
    fs::remove_all(dir);
    CohortSpec spec;
    spec.n_normal = 3;
    spec.n_ihd = 2;
    spec.normal.profile.duration_s = 310.0;
    spec.ihd.profile.duration_s = 310.0;
    spec.master_seed = 11;
    const SynthCohort synth = gen_cohort(spec);
    const fs::path manifest = write_cohort(dir, synth);

    const Cohort loaded = load_cohort(manifest);
    REQUIRE(loaded.subjects.size() == 5);
    for (std::size_t i = 0; i < loaded.subjects.size(); ++i) {
        CHECK(loaded.subjects[i].subject_id == synth.cohort.subjects[i].subject_id);
        CHECK(loaded.subjects[i].rr.intervals_ms == synth.cohort.subjects[i].rr.intervals_ms);
    }
    CHECK(fs::exists(dir / "ground_truth.json"));
}

TEST_CASE("spec validation") {
    CohortSpec spec;
    spec.n_normal = 0;
    CHECK_THROWS_AS(gen_cohort(spec), ConfigError);
    RrProfile p;
    p.duration_s = 100.0;
    CHECK_THROWS_AS(gen_rr_series(p, 1), ConfigError);
    p.duration_s = 400.0;
    p.artifact_rate = 0.2;
    CHECK_THROWS_AS(gen_rr_series(p, 1), ConfigError);
}

} // TEST_SUITE
