#include <benchmark/benchmark.h>

#include "softk/softk.hpp"

namespace {

using namespace softk;

void BM_EigHermitian(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  SeededStream rng(1);
  CMatrix m(n, n);
  for (auto& z : m.data()) z = rng.complex_normal();
  m = 0.5 * (m + m.adjoint());
  for (auto _ : state) benchmark::DoNotOptimize(eig_hermitian(m));
}
BENCHMARK(BM_EigHermitian)->RangeMultiplier(2)->Range(2, 64);

void BM_CheckRelations(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto g = random_valid_pair(n, n / 2, 3);
  for (auto _ : state) benchmark::DoNotOptimize(check_relations(g.pair));
}
BENCHMARK(BM_CheckRelations)->RangeMultiplier(2)->Range(2, 32);

void BM_DerivedIdentities(benchmark::State& state) {
  const auto g = random_valid_pair(8, 4, 5);
  for (auto _ : state) benchmark::DoNotOptimize(check_derived_identities(g.pair));
}
BENCHMARK(BM_DerivedIdentities);

void BM_FlipPathCertification(benchmark::State& state) {
  const auto g = random_valid_pair(static_cast<std::size_t>(state.range(0)), 2, 7);
  for (auto _ : state) {
    const auto path = rotation_flip_path(g.pair);
    benchmark::DoNotOptimize(verify_path(path, 1e-9));
  }
}
BENCHMARK(BM_FlipPathCertification)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_BottChern(benchmark::State& state) {
  const auto rings = static_cast<std::size_t>(state.range(0));
  auto grid = std::make_shared<const SpaceGrid>(make_sphere(rings, 2 * rings));
  const MatrixField p = bott_projection(grid);
  for (auto _ : state) benchmark::DoNotOptimize(chern_number(p));
}
BENCHMARK(BM_BottChern)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
