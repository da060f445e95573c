// Serial reference vs OpenMP pair kernels. Run with OMP_NUM_THREADS set to
// compare thread counts.

#include <benchmark/benchmark.h>

#include "vortex/gas.hpp"
#include "vortex/green.hpp"
#include "vortex/kernels.hpp"

using namespace vortex;

namespace {

const GreenEvaluator& green() {
    static const GreenEvaluator g = GreenEvaluator::expansion();
    return g;
}

VortexConfig config(std::size_t n) {
    Rng rng(1);
    return sample_lambda(n, IntensityLaw::gaussian, rng);
}

void set_pairs(benchmark::State& state, std::size_t n) {
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n * (n - 1) / 2));
}

void BM_green_serial(benchmark::State& state) {
    const auto c = config(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(kernels::green_pair_sum_serial(c.positions(), c.intensities(), green()));
    set_pairs(state, c.size());
}

void BM_green_parallel(benchmark::State& state) {
    const auto c = config(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(kernels::green_pair_sum(c.positions(), c.intensities(), green()));
    set_pairs(state, c.size());
}

void BM_velocity_serial(benchmark::State& state) {
    const auto c = config(static_cast<std::size_t>(state.range(0)));
    std::vector<Vec2> out(c.size());
    for (auto _ : state) {
        kernels::biot_savart_velocity_serial(c.positions(), c.intensities(), green(), 1.0, out);
        benchmark::DoNotOptimize(out.data());
    }
    set_pairs(state, c.size());
}

void BM_velocity_parallel(benchmark::State& state) {
    const auto c = config(static_cast<std::size_t>(state.range(0)));
    std::vector<Vec2> out(c.size());
    for (auto _ : state) {
        kernels::biot_savart_velocity(c.positions(), c.intensities(), green(), 1.0, out);
        benchmark::DoNotOptimize(out.data());
    }
    set_pairs(state, c.size());
}

void BM_log_serial(benchmark::State& state) {
    const auto c = config(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(kernels::log_pair_sum_serial(c.positions(), c.intensities()));
    set_pairs(state, c.size());
}

void BM_log_parallel(benchmark::State& state) {
    const auto c = config(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(kernels::log_pair_sum(c.positions(), c.intensities()));
    set_pairs(state, c.size());
}

}  // namespace

BENCHMARK(BM_green_serial)->Arg(200)->Arg(1000);
BENCHMARK(BM_green_parallel)->Arg(200)->Arg(1000);
BENCHMARK(BM_velocity_serial)->Arg(200)->Arg(1000);
BENCHMARK(BM_velocity_parallel)->Arg(200)->Arg(1000);
BENCHMARK(BM_log_serial)->Arg(200)->Arg(1000);
BENCHMARK(BM_log_parallel)->Arg(200)->Arg(1000);

BENCHMARK_MAIN();
