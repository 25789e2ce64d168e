#include <benchmark/benchmark.h>

#include <random>

#include "idi/kernels.hpp"

using namespace idi;

namespace {

EmitterConfig random_emitters(int dim, int n, double period) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> pos(0.0, period);
  std::vector<Vec2> p;
  for (int i = 0; i < n; ++i) {
    const double x = pos(rng);
    p.push_back({x, dim == 2 ? pos(rng) : 0.0});
  }
  return EmitterConfig(dim, std::move(p));
}

Exec exec_of(const benchmark::State& state) { return state.range(0) == 0 ? Exec::serial : Exec::parallel; }

// Args: {exec, emitters, pixels}, 2D grid.
void BM_StructureFactor(benchmark::State& state) {
  const int n = static_cast<int>(state.range(1)), m = static_cast<int>(state.range(2));
  const auto cfg = random_emitters(2, n, m);
  const QGrid g = QGrid::periodic(2, m, m);
  for (auto _ : state) benchmark::DoNotOptimize(structure_factor(cfg, g, -1, exec_of(state)));
}

// Args: {exec, pixels}, 1D grid, every order-4 tuple.
void BM_G4Table(benchmark::State& state) {
  const int m = static_cast<int>(state.range(1));
  const auto table = structure_factor(random_emitters(1, 8, m), QGrid::periodic(1, m, m));
  const auto tuples = correlation_tuples(4, m, 1);
  for (auto _ : state) benchmark::DoNotOptimize(correlation_values(4, table, tuples, exec_of(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(tuples.size()));
}

// Args: {exec, emitters}, fourth-order pairing sum.
void BM_Oracle(benchmark::State& state) {
  const auto cfg = random_emitters(2, static_cast<int>(state.range(1)), 8.0);
  const std::vector<Vec2> k{{0.0, 0.0}, {0.4, 0.1}, {1.1, -0.3}, {0.2, 0.9}};
  for (auto _ : state)
    benchmark::DoNotOptimize(oracle::expectation_bruteforce(4, cfg, k, 1e-9, exec_of(state)));
}

}  // namespace

BENCHMARK(BM_StructureFactor)->ArgNames({"par", "N", "M"})->ArgsProduct({{0, 1}, {64, 512}, {16}});
BENCHMARK(BM_G4Table)->ArgNames({"par", "M"})->ArgsProduct({{0, 1}, {33, 65}});
BENCHMARK(BM_Oracle)->ArgNames({"par", "N"})->ArgsProduct({{0, 1}, {8, 12}});

BENCHMARK_MAIN();
