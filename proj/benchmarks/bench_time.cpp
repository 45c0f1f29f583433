#include <benchmark/benchmark.h>

#include <cmath>

#include "fraclab/caputo.hpp"

using namespace fraclab;

namespace {

void caputo_l1_series_bench(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto u = TimeSeries::uniform(1.0, n, [](double t) { return std::sin(3.0 * t); });
    for (auto _ : state) {
        benchmark::DoNotOptimize(caputo_l1_series(u, FracOrder(0.4)));
    }
    state.SetComplexityN(state.range(0));
}

void caputo_direct(benchmark::State& state)
{
    const auto u = TimeSeries::analytic([](double t) { return t * t; }, [](double t) { return 2.0 * t; }, 1.0, 64);
    for (auto _ : state) {
        benchmark::DoNotOptimize(caputo_derivative(u, 1.0, FracOrder(0.5), CaputoScheme::direct_quadrature));
    }
}

void volterra(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto f = TimeSeries::uniform(1.0, n, [](double t) { return std::cos(t); });
    for (auto _ : state) {
        benchmark::DoNotOptimize(volterra_inverse(f, 0.0, FracOrder(0.5)));
    }
}

} // namespace

BENCHMARK(caputo_l1_series_bench)->RangeMultiplier(2)->Range(256, 4096)->Complexity(benchmark::oNSquared);
BENCHMARK(caputo_direct)->Unit(benchmark::kMicrosecond);
BENCHMARK(volterra)->Arg(512)->Arg(2048)->Unit(benchmark::kMillisecond);
