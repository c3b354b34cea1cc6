#include <benchmark/benchmark.h>

#include "common.hpp"
#include "ibap/solver.hpp"

namespace {

void BM_SolveMinNorm(benchmark::State& state) {
  std::mt19937_64 gen(10);
  const auto F = bench::random_family(gen, state.range(0), static_cast<std::size_t>(state.range(1)));
  const auto u = bench::random_prescription(gen, F);
  for (auto _ : state) benchmark::DoNotOptimize(ibap::solve_min_norm(F, u));
}
BENCHMARK(BM_SolveMinNorm)->ArgsProduct({{16, 64}, {2, 4}});

void BM_DirectSolve(benchmark::State& state) {
  std::mt19937_64 gen(10);
  const auto F = bench::random_family(gen, state.range(0), static_cast<std::size_t>(state.range(1)));
  const auto u = bench::random_prescription(gen, F);
  for (auto _ : state) benchmark::DoNotOptimize(ibap::direct_solve(F, u));
}
BENCHMARK(BM_DirectSolve)->ArgsProduct({{16, 64}, {2, 4}});

void BM_PeriodicProjections(benchmark::State& state) {
  std::mt19937_64 gen(10);
  const auto F = bench::random_family(gen, state.range(0), static_cast<std::size_t>(state.range(1)));
  const auto u = bench::random_prescription(gen, F);
  const ibap::Vector<double> r = ibap::Vector<double>::Zero(F.ambient_dim());
  ibap::SolveOptions opts;
  opts.tol = 1e-8;
  std::size_t sweeps = 0;
  for (auto _ : state) {
    auto [x, trace] = ibap::best_approximation(r, F, u, opts);
    sweeps = trace.iterations.size();
    benchmark::DoNotOptimize(x);
  }
  state.counters["sweeps"] = static_cast<double>(sweeps);
}
BENCHMARK(BM_PeriodicProjections)->ArgsProduct({{16, 64}, {2, 4}});

}  // namespace

BENCHMARK_MAIN();
