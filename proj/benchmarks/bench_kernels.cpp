#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "mvsc/kernels.hpp"

using namespace mvsc;

namespace {

Matrix gaussian(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    Matrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
    return m;
}

// Latent-factor shape: K x K left operator, N x N right operator.
void BM_SylvesterScaledIdentity(benchmark::State& state) {
    const Eigen::Index n = state.range(0);
    const Eigen::Index k = 10;
    const Matrix l = gaussian(n, n, 1);
    const Matrix a = 3.0 * Matrix::Identity(k, k);
    const Matrix b = l * l.transpose() / static_cast<double>(n);
    const Matrix c = gaussian(k, n, 2);
    for (auto _ : state) benchmark::DoNotOptimize(solve_sylvester(a, b, c));
    state.SetComplexityN(n);
}
BENCHMARK(BM_SylvesterScaledIdentity)->RangeMultiplier(2)->Range(32, 512)->Complexity(benchmark::oNCubed);

void BM_SylvesterSchur(benchmark::State& state) {
    const Eigen::Index n = state.range(0);
    const Eigen::Index k = 10;
    const Matrix g = gaussian(k, k, 3), l = gaussian(n, n, 4);
    const Matrix a = g * g.transpose() + Matrix::Identity(k, k);
    const Matrix b = l * l.transpose() / static_cast<double>(n);
    const Matrix c = gaussian(k, n, 5);
    for (auto _ : state) benchmark::DoNotOptimize(solve_sylvester_schur(a, b, c));
    state.SetComplexityN(n);
}
BENCHMARK(BM_SylvesterSchur)->RangeMultiplier(2)->Range(32, 512)->Complexity(benchmark::oNCubed);

void BM_SingularValueThreshold(benchmark::State& state) {
    const Eigen::Index n = state.range(0);
    const Matrix m = gaussian(n, n, 6);
    for (auto _ : state) benchmark::DoNotOptimize(singular_value_threshold(m, 0.5 * std::sqrt(static_cast<double>(n))));
    state.SetComplexityN(n);
}
BENCHMARK(BM_SingularValueThreshold)->RangeMultiplier(2)->Range(32, 512)->Complexity(benchmark::oNCubed);

void BM_ProxL21(benchmark::State& state) {
    const Eigen::Index n = state.range(0);
    const Matrix g = gaussian(60, n, 7);
    for (auto _ : state) benchmark::DoNotOptimize(prox_l21_columns(g, 5.0));
    state.SetComplexityN(n);
}
BENCHMARK(BM_ProxL21)->RangeMultiplier(4)->Range(64, 4096)->Complexity(benchmark::oN);

void BM_Procrustes(benchmark::State& state) {
    const Eigen::Index m = state.range(0);
    const Matrix target = gaussian(10, m, 8);
    for (auto _ : state) benchmark::DoNotOptimize(orthogonal_procrustes(target));
}
BENCHMARK(BM_Procrustes)->Arg(40)->Arg(216)->Arg(1024);

void BM_ProjectWeights(benchmark::State& state) {
    std::vector<double> costs(static_cast<std::size_t>(state.range(0)));
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    for (double& c : costs) c = u(rng);
    for (auto _ : state) benchmark::DoNotOptimize(project_weights(costs, 2.0));
}
BENCHMARK(BM_ProjectWeights)->Arg(3)->Arg(6)->Arg(64);

} // namespace

BENCHMARK_MAIN();
