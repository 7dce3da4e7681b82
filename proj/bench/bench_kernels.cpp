#include <benchmark/benchmark.h>

#include "rankone/experiment.hpp"
#include "rankone/oracle.hpp"
#include "rankone/random.hpp"

namespace {

using namespace rankone;

ExperimentConfig small_config()
{
    ExperimentConfig c;
    c.ratios      = {2, 16};
    c.trials      = 100;
    c.master_seed = 7;
    return c;
}

void BM_experiment_serial(benchmark::State& st)
{
    const auto c = small_config();
    for (auto _ : st)
        benchmark::DoNotOptimize(serial::run_experiment(c));
}
BENCHMARK(BM_experiment_serial)->Unit(benchmark::kMillisecond);

void BM_experiment_parallel(benchmark::State& st)
{
    const auto c = small_config();
    for (auto _ : st)
        benchmark::DoNotOptimize(run_experiment(c));
}
BENCHMARK(BM_experiment_parallel)->Unit(benchmark::kMillisecond);

Matrix<double> random_matrix(Index n)
{
    Rng                              rng = make_rng(11, {static_cast<std::uint64_t>(n)});
    std::normal_distribution<double> g;
    Matrix<double> a(n, n);
    for (Index j = 0; j < n; ++j)
        for (Index i = 0; i < n; ++i)
            a(i, j) = g(rng);
    return a;
}

void BM_best_cross_serial(benchmark::State& st)
{
    const auto a = random_matrix(st.range(0));
    for (auto _ : st)
        benchmark::DoNotOptimize(oracle::serial::best_cross_residual(a));
}
BENCHMARK(BM_best_cross_serial)->Arg(24)->Arg(48)->Unit(benchmark::kMillisecond);

void BM_best_cross_parallel(benchmark::State& st)
{
    const auto a = random_matrix(st.range(0));
    for (auto _ : st)
        benchmark::DoNotOptimize(oracle::best_cross_residual(a));
}
BENCHMARK(BM_best_cross_parallel)->Arg(24)->Arg(48)->Unit(benchmark::kMillisecond);

void BM_sphere_tail_serial(benchmark::State& st)
{
    for (auto _ : st)
        benchmark::DoNotOptimize(oracle::serial::sphere_tail_mc(100, 0.05, 2, 100000, 3));
}
BENCHMARK(BM_sphere_tail_serial)->Unit(benchmark::kMillisecond);

void BM_sphere_tail_parallel(benchmark::State& st)
{
    for (auto _ : st)
        benchmark::DoNotOptimize(oracle::sphere_tail_mc(100, 0.05, 2, 100000, 3));
}
BENCHMARK(BM_sphere_tail_parallel)->Unit(benchmark::kMillisecond);

void BM_coherence_serial(benchmark::State& st)
{
    for (auto _ : st)
        benchmark::DoNotOptimize(oracle::serial::coherence_failure_mc(100, 9.2, 100000, 3));
}
BENCHMARK(BM_coherence_serial)->Unit(benchmark::kMillisecond);

void BM_coherence_parallel(benchmark::State& st)
{
    for (auto _ : st)
        benchmark::DoNotOptimize(oracle::coherence_failure_mc(100, 9.2, 100000, 3));
}
BENCHMARK(BM_coherence_parallel)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
