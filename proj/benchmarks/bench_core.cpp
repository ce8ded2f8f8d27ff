#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "dsm/linops.hpp"
#include "dsm/problems.hpp"
#include "dsm/rng.hpp"
#include "dsm/solver.hpp"
#include "dsm/tikhonov.hpp"

using namespace dsm;

static void BM_Matvec(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto A = hilbert_matrix(n);
    SplitMix64 rng(1);
    auto x = gaussian_vector(rng, n);
    std::vector<double> y(n);
    for (auto _ : state) {
        A.apply(x.data(), y.data());
        benchmark::DoNotOptimize(y.data());
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Matvec)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

static void BM_SymEigen(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto A = hilbert_matrix(n);
    for (auto _ : state) {
        auto eig = sym_eigen(A);
        benchmark::DoNotOptimize(eig.eigenvalues.data());
    }
}
BENCHMARK(BM_SymEigen)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

// Steps per second of the fixed-step integrator; the dominant cost of a
// long-horizon solve.
static void BM_Rk4Steps(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto prob = hilbert_problem(n, 1);
    IntegratorConfig cfg;
    cfg.fixed_step = 0.005;
    const double chunk = 1000 * 0.005;
    for (auto _ : state) {
        auto res = rk4_propagate(prob.A, prob.f, 1e-3, chunk, cfg);
        benchmark::DoNotOptimize(res.state.re.data());
    }
    state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_Rk4Steps)->Arg(4)->Arg(8)->Arg(16)->Arg(64);

static void BM_TikhonovSolve(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto prob = hilbert_problem(n, 1);
    for (auto _ : state) {
        auto rep = tikhonov_solve(prob.A, prob.f, 1e-4);
        benchmark::DoNotOptimize(rep.estimate.data());
    }
}
BENCHMARK(BM_TikhonovSolve)->Arg(8)->Arg(32)->Arg(64);

static void BM_SolveAuto(benchmark::State& state) {
    const auto prob = hilbert_problem(6, 1);
    const double delta = 1e-3;
    const auto noisy = add_noise(prob.f, delta, 2);
    for (auto _ : state) {
        auto rep = solve_auto(prob.A, noisy.f_delta, delta);
        benchmark::DoNotOptimize(rep.estimate.data());
    }
}
BENCHMARK(BM_SolveAuto);

BENCHMARK_MAIN();
