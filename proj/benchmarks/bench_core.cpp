#include <vector>

#include <benchmark/benchmark.h>

#include "ipm/mom_est.hpp"
#include "ipm/obs.hpp"
#include "ipm/sim.hpp"

namespace {

void BM_SimulateOu(benchmark::State& state) {
    const ipm::ModelSpec model = ipm::ou_model();
    ipm::SimConfig cfg;
    cfg.N = static_cast<std::size_t>(state.range(0));
    cfg.T = 10.0;
    cfg.seed = 7;
    for (auto _ : state) {
        double sink = 0.0;
        ipm::run_ips(model, cfg, [&](std::size_t, std::span<const double> x, std::span<const double>) {
            sink += x[0];
        });
        benchmark::DoNotOptimize(sink);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(cfg.N * cfg.steps()));
}
BENCHMARK(BM_SimulateOu)->Arg(10)->Arg(100)->Arg(250);

void BM_InteractionPolynomial(benchmark::State& state) {
    const std::vector<double> gamma{0.0, 0.5, 0.0, -0.5};
    const std::vector<double> sums{100.0, 3.0, 120.0, -7.0, 300.0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(ipm::interaction_polynomial(sums, 100, gamma));
    }
}
BENCHMARK(BM_InteractionPolynomial);

void BM_AccumulatorPush(benchmark::State& state) {
    ipm::PathAccumulator acc(static_cast<int>(state.range(0)), 1);
    double x = 0.1;
    for (auto _ : state) {
        acc.push(x);
        x = 1.0 - x * 0.5;
    }
}
BENCHMARK(BM_AccumulatorPush)->Arg(4)->Arg(12);

void BM_SolveOuExact(benchmark::State& state) {
    const ipm::MomentSystem sys = ipm::ou_exact_system(-1.0, 1.0, static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(ipm::solve(sys));
    }
}
BENCHMARK(BM_SolveOuExact)->Arg(2)->Arg(10);

}  // namespace
BENCHMARK_MAIN();
