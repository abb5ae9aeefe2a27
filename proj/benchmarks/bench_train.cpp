#include <benchmark/benchmark.h>

#include "hrv/network.hpp"
#include "hrv/rng.hpp"

namespace {

struct Dataset {
    Eigen::MatrixXd x;
    Eigen::MatrixXd t;
};

Dataset dataset(Eigen::Index rows, Eigen::Index dim) {
    hrv::Rng rng(7);
    Dataset d;
    d.x.resize(rows, dim);
    d.t.resize(rows, 2);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index c = 0; c < dim; ++c) d.x(i, c) = rng.normal();
        const bool ihd = rng.bernoulli(0.3);
        d.t(i, 0) = ihd ? 0.0 : 1.0;
        d.t(i, 1) = ihd ? 1.0 : 0.0;
    }
    return d;
}

// One protocol-sized training run: 724 training rows, full-batch updates.
void BM_Train(benchmark::State& state) {
    const auto dim = static_cast<Eigen::Index>(state.range(0));
    const auto hidden = static_cast<std::size_t>(state.range(1));
    const Dataset d = dataset(724, dim);
    hrv::TrainConfig cfg;
    cfg.max_epochs = 100;
    cfg.target_mse = 0.0;
    for (auto _ : state) {
        hrv::Network net = hrv::init_network(static_cast<std::size_t>(dim), hidden, 1);
        benchmark::DoNotOptimize(hrv::train(std::move(net), d.x, d.t, cfg));
    }
    state.SetItemsProcessed(state.iterations() * 100 * 724);
}
BENCHMARK(BM_Train)->Args({5, 2})->Args({5, 6})->Args({17, 2})->Args({17, 6});

void BM_Forward(benchmark::State& state) {
    const hrv::Network net = hrv::init_network(17, 6, 2);
    hrv::Rng rng(8);
    Eigen::VectorXd x(17);
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = rng.normal();
    for (auto _ : state) benchmark::DoNotOptimize(hrv::forward(net, x));
}
BENCHMARK(BM_Forward);

void BM_Gradient(benchmark::State& state) {
    const hrv::Network net = hrv::init_network(17, 6, 3);
    hrv::Rng rng(9);
    Eigen::VectorXd x(17);
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = rng.normal();
    const Eigen::Vector2d t(1.0, 0.0);
    for (auto _ : state) benchmark::DoNotOptimize(hrv::gradient(net, x, t));
}
BENCHMARK(BM_Gradient);

} // namespace

BENCHMARK_MAIN();
