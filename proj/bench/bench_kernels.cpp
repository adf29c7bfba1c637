#include <benchmark/benchmark.h>

#include "popcorn/covering.hpp"
#include "popcorn/kernels.hpp"

using namespace popcorn;

namespace {

// args: t numerator, t denominator, d, level
SetSpec spec_of(const benchmark::State& state) {
    return SetSpec::make(Rational(state.range(0), state.range(1)), static_cast<int>(state.range(2)));
}

void BM_RowKernel(benchmark::State& state) {
    const SetSpec spec = spec_of(state);
    const int level = static_cast<int>(state.range(3));
    const std::uint64_t q_max = cover_q_max(spec, DyadicScale(level));
    std::uint64_t cells = 0;
    for (auto _ : state) {
        cells = kernels::occupied_cells(spec, level, 2, q_max);
        benchmark::DoNotOptimize(cells);
    }
    state.counters["cells"] = static_cast<double>(cells);
}

void BM_SerialReference(benchmark::State& state) {
    const SetSpec spec = spec_of(state);
    const int level = static_cast<int>(state.range(3));
    const std::uint64_t q_max = cover_q_max(spec, DyadicScale(level));
    std::uint64_t cells = 0;
    for (auto _ : state) {
        cells = kernels::occupied_cells_reference(spec, level, 2, q_max);
        benchmark::DoNotOptimize(cells);
    }
    state.counters["cells"] = static_cast<double>(cells);
}

void BM_LayerRecount(benchmark::State& state) {
    const SetSpec spec = spec_of(state);
    const DyadicScale scale(static_cast<int>(state.range(3)));
    for (auto _ : state) {
        std::uint64_t sum = 0;
        for (std::uint64_t k = 1; k < scale.cells_per_axis(); ++k) sum += layer_cover_count(spec, scale, k);
        benchmark::DoNotOptimize(sum);
    }
}

void shapes(benchmark::internal::Benchmark* b) {
    b->Args({1, 1, 2, 8})->Args({1, 1, 2, 10})->Args({1, 1, 2, 12});
    b->Args({1, 2, 2, 6})->Args({1, 1, 3, 6})->Args({1, 1, 3, 7});
    b->Unit(benchmark::kMillisecond);
}

} // namespace

BENCHMARK(BM_RowKernel)->Apply(shapes);
BENCHMARK(BM_SerialReference)->Apply(shapes);
BENCHMARK(BM_LayerRecount)->Apply(shapes);

BENCHMARK_MAIN();
