#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "hrv/nonlinear.hpp"
#include "hrv/preprocess.hpp"
#include "hrv/rng.hpp"
#include "hrv/spectral.hpp"
#include "hrv/time_features.hpp"

namespace {

std::vector<double> uniform_segment() {
    hrv::Rng rng(11);
    std::vector<double> x(600);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double t = static_cast<double>(i) / 2.0;
        x[i] = 850.0 + 35.0 * std::sin(2.0 * std::numbers::pi * 0.1 * t) + 20.0 * rng.normal();
    }
    return x;
}

std::vector<double> beat_segment(std::size_t n) {
    hrv::Rng rng(12);
    std::vector<double> rr(n);
    for (double& v : rr) v = 840.0 + 60.0 * rng.normal();
    return rr;
}

void BM_Periodogram(benchmark::State& state) {
    const auto x = uniform_segment();
    for (auto _ : state) benchmark::DoNotOptimize(hrv::periodogram_psd(x));
}
BENCHMARK(BM_Periodogram);

void BM_BandPowersAndBeta(benchmark::State& state) {
    const hrv::Psd psd = hrv::periodogram_psd(uniform_segment());
    for (auto _ : state) {
        benchmark::DoNotOptimize(hrv::band_powers(psd));
        benchmark::DoNotOptimize(hrv::beta_exponent(psd));
    }
}
BENCHMARK(BM_BandPowersAndBeta);

void BM_TimeFeatures(benchmark::State& state) {
    const auto rr = beat_segment(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(hrv::compute_time_features(rr));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TimeFeatures)->Arg(350)->Arg(100000);

void BM_Poincare(benchmark::State& state) {
    const auto rr = beat_segment(350);
    for (auto _ : state) benchmark::DoNotOptimize(hrv::poincare(rr));
}
BENCHMARK(BM_Poincare);

void BM_HiguchiFd(benchmark::State& state) {
    const auto rr = beat_segment(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(hrv::higuchi_fd(rr, 10));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_HiguchiFd)->Arg(350)->Arg(1000);

void BM_ArtifactDetection(benchmark::State& state) {
    hrv::Rng rng(13);
    std::vector<double> rr(static_cast<std::size_t>(state.range(0)));
    for (std::size_t i = 0; i < rr.size(); ++i) {
        rr[i] = 850.0 + 40.0 * rng.normal();
        if (rng.bernoulli(0.02)) rr[i] *= 3.0;
    }
    const hrv::RRSeries series = hrv::make_rr_series(std::move(rr));
    for (auto _ : state) benchmark::DoNotOptimize(hrv::detect_artifacts(series));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ArtifactDetection)->Arg(1000)->Arg(100000);

void BM_ResampleUniform(benchmark::State& state) {
    hrv::Rng rng(14);
    std::vector<double> rr(static_cast<std::size_t>(state.range(0)));
    for (double& v : rr) v = 840.0 + 30.0 * rng.normal();
    const hrv::RRSeries series = hrv::make_rr_series(std::move(rr));
    const hrv::CleanSeries clean =
        hrv::correct_artifacts(series, std::vector<bool>(series.size(), false));
    for (auto _ : state) benchmark::DoNotOptimize(hrv::resample_uniform(clean));
}
BENCHMARK(BM_ResampleUniform)->Arg(1000)->Arg(100000);

} // namespace

BENCHMARK_MAIN();
