#include <benchmark/benchmark.h>

#include <ellidyn/lattice.hpp>
#include <ellidyn/misiurewicz.hpp>
#include <ellidyn/reference.hpp>
#include <ellidyn/scan.hpp>

using namespace ellidyn;

namespace
{

const Complex kLambda{1.2, 0.9};
const Complex kPoint{0.31, 0.17};

void BM_WpSeries(benchmark::State &state)
{
    const Lattice lat = make_lattice(LatticeKind::Square, kLambda);
    for (auto _ : state) {
        benchmark::DoNotOptimize(wp(kPoint, lat));
    }
}
BENCHMARK(BM_WpSeries);

void BM_WpDirectSum(benchmark::State &state)
{
    const Lattice lat = make_lattice(LatticeKind::Square, kLambda);
    const int radius = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(reference::wp_lattice_sum(kPoint, lat, radius));
    }
}
BENCHMARK(BM_WpDirectSum)->Arg(50)->Arg(300);

void BM_Density(benchmark::State &state)
{
    const Execution exec = state.range(0) ? Execution::Parallel : Execution::Serial;
    for (auto _ : state) {
        benchmark::DoNotOptimize(density_scan(LatticeKind::Square, Complex{1.4, 1.1}, {1e-2}, 200, 0.05, 100, 7, {}, exec));
    }
}
BENCHMARK(BM_Density)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_RenderParameter(benchmark::State &state)
{
    const Execution exec = state.range(0) ? Execution::Parallel : Execution::Serial;
    const ScanGrid grid{Complex{0.5, 0.5}, Complex{2.5, 2.5}, 32, 32};
    for (auto _ : state) {
        benchmark::DoNotOptimize(render_parameter_plane(LatticeKind::Square, grid, 300, {}, exec));
    }
}
BENCHMARK(BM_RenderParameter)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_RenderDynamical(benchmark::State &state)
{
    const Execution exec = state.range(0) ? Execution::Parallel : Execution::Serial;
    const ScanGrid grid{Complex{-2.0, -2.0}, Complex{4.0, 4.0}, 64, 64};
    ToleranceConfig cfg;
    cfg.pole_eps = 1e-3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(render_dynamical_plane(LatticeKind::Triangular, kLambda, grid, 32, cfg, exec));
    }
}
BENCHMARK(BM_RenderDynamical)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
