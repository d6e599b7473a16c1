#include <benchmark/benchmark.h>

#include "fkpp/ensemble.hpp"
#include "fkpp/etd_solver.hpp"
#include "fkpp/matrix_exp.hpp"
#include "fkpp/system_matrix.hpp"
#include "fkpp/test_problem.hpp"

namespace {

using namespace fkpp;

SystemMatrix test_operator(int n) {
    return build_system_matrix(Grid1D(1.0, n), [](double x) { return 1.0 + x * x; }, [](double x) { return x; });
}

void BM_MatrixExp(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Matrix m = test_operator(n).dense();
    const double k = 0.2 / (n * n);
    for (auto _ : state) benchmark::DoNotOptimize(matrix_exp(m, k));
    state.SetComplexityN(n);
}
BENCHMARK(BM_MatrixExp)->RangeMultiplier(2)->Range(10, 160)->Complexity();

void BM_BuildPropagators(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const SystemMatrix m = test_operator(n);
    const double k = 0.2 / (n * n);
    for (auto _ : state) benchmark::DoNotOptimize(build_propagators(m, k));
}
BENCHMARK(BM_BuildPropagators)->Arg(10)->Arg(40)->Arg(100);

void BM_SolveSample(benchmark::State& state) {
    const Model m = make_test_problem();
    const Grid1D grid(1.0, 10);
    const TimeMesh mesh(0.01, 5);
    std::int64_t id = 0;
    for (auto _ : state) benchmark::DoNotOptimize(solve_sample(m, grid, mesh, id++));
}
BENCHMARK(BM_SolveSample);

void BM_EnsembleCollocation(benchmark::State& state) {
    const Model m = make_test_problem();
    const SchemeConfig config{Grid1D(1.0, 10), TimeMesh(0.01, 5), Collocation{static_cast<int>(state.range(0))},
                              false, 1};
    for (auto _ : state) benchmark::DoNotOptimize(run_ensemble(m, config));
}
BENCHMARK(BM_EnsembleCollocation)->Arg(64)->Arg(128);

void BM_EnsembleMonteCarlo(benchmark::State& state) {
    const Model m = make_test_problem();
    const SchemeConfig config{Grid1D(1.0, 10), TimeMesh(0.01, 5), MonteCarlo{10000, 0},
                              false, static_cast<int>(state.range(0))};
    for (auto _ : state) benchmark::DoNotOptimize(run_ensemble(m, config));
}
BENCHMARK(BM_EnsembleMonteCarlo)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_ExactStatistics(benchmark::State& state) {
    const Grid1D grid(1.0, 10);
    for (auto _ : state) benchmark::DoNotOptimize(exact_statistics(grid, 0.01, reference_reaction_law()));
}
BENCHMARK(BM_ExactStatistics)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
