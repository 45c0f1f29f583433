#include <benchmark/benchmark.h>

// The distro's benchmark_main archive carries LTO bytecode from another compiler build.
BENCHMARK_MAIN();
