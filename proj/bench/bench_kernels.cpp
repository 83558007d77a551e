// Serial reference vs OpenMP backend on the replica-parallel kernels. Both
// backends produce bit-identical estimates; only wall time differs.

#include <benchmark/benchmark.h>

#include "mshit/dnorm.hpp"
#include "mshit/hitting.hpp"
#include "mshit/msp.hpp"
#include "mshit/replicate.hpp"

namespace {

using namespace mshit;

const TimeGrid& grid()
{
    static const TimeGrid g = make_grid(default_grid_points);
    return g;
}

Backend backend_of(const benchmark::State& state)
{
    return state.range(0) == 0 ? Backend::serial : Backend::openmp;
}

void BM_JointCdf(benchmark::State& state)
{
    ScopedExecution exec{{backend_of(state), 0}};
    const auto f = LevelFunction::piecewise_linear(grid(), {{0.0, -0.5}, {1.0, -1.5}});
    const auto n = static_cast<std::size_t>(state.range(1));
    for (auto _ : state)
        benchmark::DoNotOptimize(joint_cdf_estimate(SineBump{}, f, n, 7).value);
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * state.range(1));
}

void BM_HittingCurve(benchmark::State& state)
{
    ScopedExecution exec{{backend_of(state), 0}};
    const auto levels = default_integral_levels();
    const auto n = static_cast<std::size_t>(state.range(1));
    for (auto _ : state)
        benchmark::DoNotOptimize(
            hitting_curve(TwoBranch{}, levels, Interval{0, 1}, grid(), n, 7, GeneratorConstants{2.0, 0.0}));
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * state.range(1));
}

void BM_DNorm(benchmark::State& state)
{
    ScopedExecution exec{{backend_of(state), 0}};
    const auto f = LevelFunction::constant(grid(), -1.0);
    const auto n = static_cast<std::size_t>(state.range(1));
    for (auto _ : state)
        benchmark::DoNotOptimize(dnorm_estimate(PiecewiseExample{}, f, n, 7).value);
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * state.range(1));
}

// range(0): 0 serial, 1 openmp. range(1): replications.
BENCHMARK(BM_JointCdf)->ArgsProduct({{0, 1}, {2000, 20000}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HittingCurve)->ArgsProduct({{0, 1}, {2000, 20000}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DNorm)->ArgsProduct({{0, 1}, {20000, 200000}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
