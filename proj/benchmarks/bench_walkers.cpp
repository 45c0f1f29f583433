#include <benchmark/benchmark.h>

#include "fraclab/walkers.hpp"

using namespace fraclab;

namespace {

void classical_walk(benchmark::State& state)
{
    WalkConfig cfg;
    cfg.h = 0.02;
    cfg.horizon = 0.5;
    cfg.ensemble = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_classical_walk(cfg));
    }
}

void censored_walk(benchmark::State& state)
{
    WalkConfig cfg;
    cfg.kind = WalkKind::long_jump;
    cfg.h = 1.0 / 64;
    cfg.horizon = 0.1;
    cfg.ensemble = 10000;
    cfg.domain = Interval{-1.0, 1.0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_censored_walk(cfg));
    }
}

void free_longjump_walk(benchmark::State& state)
{
    WalkConfig cfg;
    cfg.kind = WalkKind::long_jump;
    cfg.h = 1e-3;
    cfg.horizon = 1.0;
    cfg.ensemble = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_free_longjump_walk(cfg));
    }
}

void comb_walk(benchmark::State& state)
{
    CombConfig cfg;
    cfg.steps = 10000;
    cfg.ensemble = 500;
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_comb_walk(cfg));
    }
    state.SetItemsProcessed(state.iterations() * 500 * 10000);
}

void counter_rng(benchmark::State& state)
{
    CounterRng rng(42, 0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(rng.uniform());
    }
}

} // namespace

BENCHMARK(classical_walk)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(censored_walk)->Unit(benchmark::kMillisecond);
BENCHMARK(free_longjump_walk)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(comb_walk)->Unit(benchmark::kMillisecond);
BENCHMARK(counter_rng);
