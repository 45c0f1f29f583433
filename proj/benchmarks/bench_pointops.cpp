#include <benchmark/benchmark.h>

#include <vector>

#include "fraclab/oracles.hpp"
#include "fraclab/pointops.hpp"

using namespace fraclab;

namespace {

void fraclap_gaussian(benchmark::State& state)
{
    const FracOrder s(static_cast<double>(state.range(0)) / 100.0);
    const auto entry = oracle("gaussian", s);
    for (auto _ : state) {
        benchmark::DoNotOptimize(fraclap(entry.function, 0.7, s, entry.quadrature));
    }
}

void fraclap_compact_endpoint(benchmark::State& state)
{
    const auto entry = oracle("u_half");
    const FracOrder s(0.5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(fraclap(entry.function, 0.95, s, entry.quadrature));
    }
}

void fraclap_batch_threads(benchmark::State& state)
{
    const auto entry = oracle("arctan_layer");
    std::vector<double> xs;
    for (int i = 0; i < 64; ++i) {
        xs.push_back(-4.0 + 0.125 * i);
    }
    const auto threads = static_cast<unsigned>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(fraclap_batch(entry.function, xs, FracOrder(0.5), entry.quadrature,
                                               FracLapMethod::second_difference, threads));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(xs.size()));
}

void master_constant_kernel(benchmark::State& state)
{
    FunctionHandle2 u{[](Point2 p) {
                          const double q = 1.0 - (p[0] * p[0] + p[1] * p[1]) / 4.0;
                          return q > 0.0 ? q * q * q * q : 0.0;
                      }};
    u.support_radius = 2.0;
    const auto k = MasterKernel::constant(Mat2{{{1.0, 0.0}, {0.0, 2.0}}});
    for (auto _ : state) {
        benchmark::DoNotOptimize(master_operator(u, {0.3, -0.2}, FracOrder(0.9), k));
    }
}

} // namespace

BENCHMARK(fraclap_gaussian)->Arg(25)->Arg(50)->Arg(75)->Unit(benchmark::kMicrosecond);
BENCHMARK(fraclap_compact_endpoint)->Unit(benchmark::kMicrosecond);
BENCHMARK(fraclap_batch_threads)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(master_constant_kernel)->Unit(benchmark::kMillisecond);
