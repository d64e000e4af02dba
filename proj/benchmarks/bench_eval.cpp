#include <benchmark/benchmark.h>

#include <random>

#include "fuzzymatch/eval.hpp"

namespace {

std::vector<fuzzymatch::ScoredPair> make_scored(std::size_t n) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> score(0.0, 1.0);
  std::bernoulli_distribution label(0.3);
  std::vector<fuzzymatch::ScoredPair> out;
  for (std::size_t i = 0; i < n; ++i)
    out.emplace_back(fuzzymatch::PairRecord{"a", "b", label(rng) ? 1 : 0, i}, score(rng), "bench");
  return out;
}

void BM_AveragePrecision(benchmark::State &state) {
  const auto scored = make_scored(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(fuzzymatch::eval::average_precision(scored));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_AveragePrecision)->RangeMultiplier(8)->Range(64, 32768)->Complexity();

void BM_BuildReport(benchmark::State &state) {
  const auto scored = make_scored(4000);
  for (auto _ : state)
    benchmark::DoNotOptimize(fuzzymatch::eval::build_report(scored, "bench"));
}
BENCHMARK(BM_BuildReport);

} // namespace
