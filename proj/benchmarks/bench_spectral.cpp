#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "fraclab/heatflow.hpp"
#include "fraclab/spectral.hpp"

using namespace fraclab;

namespace {

GridFunction periodic_sample(std::size_t n)
{
    return GridFunction::sample(Domain::torus(2.0 * std::numbers::pi), n,
                                [](double x) { return std::exp(std::sin(x)) + 0.3 * std::cos(3.0 * x); });
}

void torus_fraclap_fft(benchmark::State& state)
{
    const auto u = periodic_sample(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(torus_fraclap(u, FracOrder(0.5)));
    }
    state.SetComplexityN(state.range(0));
}

void dirichlet_round_trip(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto u = GridFunction::sample(Domain::interval(0.0, 1.0), n, [](double x) { return x * (1.0 - x); });
    for (auto _ : state) {
        const auto c = dirichlet_spectral_fraclap(analyze(u, BasisKind::dirichlet_sine), FracOrder(0.3));
        benchmark::DoNotOptimize(synthesize(c, u.domain(), n));
    }
}

void heat_kernel_table(benchmark::State& state)
{
    std::vector<double> x;
    for (int i = -400; i <= 400; ++i) {
        x.push_back(0.05 * i);
    }
    const FracOrder s(static_cast<double>(state.range(0)) / 100.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(heat_kernel_fourier(s, x));
    }
}

void regional_heat(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto u0 = GridFunction::sample(Domain::interval(-1.0, 1.0), n, [](double x) { return std::exp(-20.0 * x * x); });
    for (auto _ : state) {
        benchmark::DoNotOptimize(regional_heat_solve(u0, FracOrder(0.5), 0.01));
    }
}

} // namespace

BENCHMARK(torus_fraclap_fft)->RangeMultiplier(4)->Range(256, 65536)->Complexity(benchmark::oNLogN);
BENCHMARK(dirichlet_round_trip)->Arg(255)->Arg(1023)->Unit(benchmark::kMicrosecond);
BENCHMARK(heat_kernel_table)->Arg(50)->Arg(75)->Unit(benchmark::kMillisecond);
BENCHMARK(regional_heat)->Arg(65)->Arg(129)->Unit(benchmark::kMillisecond);
