#include <benchmark/benchmark.h>

#include "cbm/closed_form.hpp"
#include "cbm/deferral.hpp"
#include "cbm/optimal_policy.hpp"
#include "cbm/simulator.hpp"

namespace {

const cbm::ModelParams kWind{0.31, 0.31, 4.0, 0.6, 1.0, 300000.0, 1000.0, 2000.0};

void BM_ControlLimitCost(benchmark::State& state) {
    double t = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(cbm::cost_rate_control_limit(kWind, t).total);
        t = t < 0.9 ? t + 0.1 : 0.0;
    }
}
BENCHMARK(BM_ControlLimitCost);

void BM_SolveThreshold(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(cbm::solve_t_star(kWind).t_hat);
}
BENCHMARK(BM_SolveThreshold);

void BM_DeferralRate(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(cbm::cost_rate_deferral(kWind, 0.2).rate);
}
BENCHMARK(BM_DeferralRate);

void BM_SimulateShort(benchmark::State& state) {
    cbm::SimConfig cfg{1000.0, 1, 7};
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            cbm::simulate(kWind, cbm::policy_control_limit(0.2), cfg).rate);
        ++cfg.seed;
    }
}
BENCHMARK(BM_SimulateShort);

}  // namespace

BENCHMARK_MAIN();
