#include <benchmark/benchmark.h>

#include "common.hpp"
#include "ibap/angles.hpp"
#include "ibap/ibap.hpp"

namespace {

void BM_FromSpanning(benchmark::State& state) {
  std::mt19937_64 gen(1);
  const auto n = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(bench::random_subspace(gen, n, n / 2));
}
BENCHMARK(BM_FromSpanning)->RangeMultiplier(2)->Range(8, 128);

void BM_Intersect(benchmark::State& state) {
  std::mt19937_64 gen(2);
  const auto n = state.range(0);
  const auto U = bench::random_subspace(gen, n, 2 * n / 3);
  const auto V = bench::random_subspace(gen, n, 2 * n / 3);
  for (auto _ : state) benchmark::DoNotOptimize(ibap::intersect(U, V));
}
BENCHMARK(BM_Intersect)->RangeMultiplier(2)->Range(8, 128);

void BM_CosFriedrichs(benchmark::State& state) {
  std::mt19937_64 gen(3);
  const auto n = state.range(0);
  const auto U = bench::random_subspace(gen, n, n / 2);
  const auto V = bench::random_subspace(gen, n, n / 3);
  for (auto _ : state) benchmark::DoNotOptimize(ibap::cos_friedrichs(U, V));
}
BENCHMARK(BM_CosFriedrichs)->RangeMultiplier(2)->Range(8, 128);

void BM_VerifyIbap(benchmark::State& state) {
  std::mt19937_64 gen(4);
  const auto F = bench::random_family(gen, state.range(0), static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(ibap::verify_ibap(F));
}
BENCHMARK(BM_VerifyIbap)->ArgsProduct({{16, 64}, {2, 4, 8}});

}  // namespace

BENCHMARK_MAIN();
