#include "dmt/witt.hpp"

#include <benchmark/benchmark.h>

using namespace dmt;

static void BM_GenerateAddLaw(benchmark::State& state) {
  long p = state.range(0), n = state.range(1);
  for (auto _ : state) {
    WittLaw law = generate_law(p, n, LawKind::add);
    benchmark::DoNotOptimize(law);
  }
}
BENCHMARK(BM_GenerateAddLaw)->Args({2, 4})->Args({3, 3})->Args({5, 2});

static void BM_WittAdd(benchmark::State& state) {
  long p = state.range(0), n = state.range(1);
  auto k = Field::make(p);
  WittVec u = from_residue(k, n, 1);
  WittVec v = from_residue(k, n, p + 1);
  get_law(p, n, LawKind::add);  // warm the memo outside the loop
  for (auto _ : state) {
    WittVec w = witt_add(u, v);
    benchmark::DoNotOptimize(w);
  }
}
BENCHMARK(BM_WittAdd)->Args({2, 4})->Args({3, 3})->Args({5, 2});

BENCHMARK_MAIN();
