#include <cmath>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include <chebdde/blocksys.hpp>
#include <chebdde/interp.hpp>
#include <chebdde/linalg.hpp>
#include <chebdde_examples/examples.hpp>

namespace {

using namespace chebdde;

void BM_Diffmat(benchmark::State& state) {
    const Grid g = cheb_grid(static_cast<std::size_t>(state.range(0)), 0.0, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(diffmat(g));
}
BENCHMARK(BM_Diffmat)->RangeMultiplier(2)->Range(16, 256);

void BM_Barymat(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Grid g = cheb_grid(n, 0.0, 1.0);
    std::vector<double> pts(g.nodes().begin(), g.nodes().end());
    for (auto& t : pts) t *= 0.5;
    for (auto _ : state) benchmark::DoNotOptimize(barymat(pts, g));
}
BENCHMARK(BM_Barymat)->RangeMultiplier(2)->Range(16, 256);

void BM_DelayBlock(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const double breaks[] = {0.0, 0.5, 1.0, 1.5, 2.0};
    const std::size_t sizes[] = {n, n, n, n};
    const PiecewiseGrid g = build_piecewise_grid(breaks, sizes);
    for (auto _ : state)
        benchmark::DoNotOptimize(delay_block(g, [](double t) { return t - 0.5; }, HistorySpec::constant(0.0)));
}
BENCHMARK(BM_DelayBlock)->RangeMultiplier(2)->Range(8, 64);

void BM_LuSolve(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Grid g = cheb_grid(n, 0.0, 1.0);
    Matrix a = diffmat(g) + Matrix::identity(n);
    for (std::size_t j = 0; j < n; ++j) a(0, j) = j == 0 ? 1.0 : 0.0;
    const std::vector<double> b(n, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(lu_solve(a, b));
}
BENCHMARK(BM_LuSolve)->RangeMultiplier(2)->Range(32, 512);

void BM_Example(benchmark::State& state, const std::string& name) {
    const auto* spec = examples::find_example(name);
    for (auto _ : state) benchmark::DoNotOptimize(spec->run({}));
}
BENCHMARK_CAPTURE(BM_Example, example1, std::string("example1"))->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Example, example3, std::string("example3"))->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Example, example6, std::string("example6"))->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Example, chebfun_ex5, std::string("chebfun_ex5"))->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Example, logistic_cycle, std::string("logistic_cycle"))->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
