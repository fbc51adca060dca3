#include <benchmark/benchmark.h>

#include <limits>

#include "mvsc/mvsc.hpp"

using namespace mvsc;

namespace {

MultiViewDataset fixture(Eigen::Index samples) {
    SyntheticSpec s;
    s.samples = samples;
    s.k_s = 5;
    s.k_c = 5;
    s.intrinsic_dim = 1;
    s.dims = {20, 20, 20};
    s.sigma = 0.05;
    s.seed = 9;
    return generate_synthetic(s);
}

SolverConfig iterations(int n) {
    SolverConfig c;
    c.k_s = 10;
    c.k_c = 10;
    c.lambda1 = 0.1;
    c.lambda2 = 0.1;
    c.lambda3 = 1.0;
    c.mu0 = 0.1;
    c.max_iters = n;
    c.epsilon = std::numeric_limits<double>::min();  // never stop early
    c.seed = 7;
    return c;
}

// Two iterations so the timed work includes a non-degenerate Procrustes step.
// Cost per iteration grows as N^3 from the N x N solves.
void BM_CslfIterations(benchmark::State& state) {
    const MultiViewDataset data = fixture(state.range(0));
    const SolverConfig config = iterations(2);
    for (auto _ : state) benchmark::DoNotOptimize(fit_cslf(data, config));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CslfIterations)->RangeMultiplier(2)->Range(75, 600)->Complexity(benchmark::oNCubed)->Unit(benchmark::kMillisecond);

void BM_CslfsIterations(benchmark::State& state) {
    const MultiViewDataset data = fixture(state.range(0));
    SolverConfig config = iterations(2);
    config.lambda2 = 10.0;
    config.lambda3 = 0.1;
    for (auto _ : state) benchmark::DoNotOptimize(fit_cslfs(data, config));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CslfsIterations)->RangeMultiplier(2)->Range(75, 600)->Complexity(benchmark::oNCubed)->Unit(benchmark::kMillisecond);

void BM_CslfsIterationsThreaded(benchmark::State& state) {
    const MultiViewDataset data = fixture(300);
    SolverConfig config = iterations(2);
    config.lambda2 = 10.0;
    config.lambda3 = 0.1;
    FitOptions options;
    options.threads = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(fit_cslfs(data, config, options));
}
BENCHMARK(BM_CslfsIterationsThreaded)->Arg(1)->Arg(3)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_SpectralCluster(benchmark::State& state) {
    const Eigen::Index n = state.range(0);
    const MultiViewDataset data = fixture(n);
    const AdjacencyMatrix a = adjacency_cslf(least_squares_representation(data.views[0], 0.1));
    for (auto _ : state) benchmark::DoNotOptimize(spectral_cluster(a, 3, 11));
    state.SetComplexityN(n);
}
BENCHMARK(BM_SpectralCluster)->RangeMultiplier(2)->Range(75, 600)->Complexity(benchmark::oNCubed)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
