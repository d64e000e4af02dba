#include <benchmark/benchmark.h>

#include "fuzzymatch/metrics.hpp"

namespace m = fuzzymatch::metrics;

namespace {

const char *kLeft = "Chuck Fleischmann (R)";
const char *kRight = "Charles Fleischmann (R)";

void BM_Metric(benchmark::State &state) {
  const auto kind = m::kAllMetrics[static_cast<std::size_t>(state.range(0))];
  state.SetLabel(std::string(m::metric_name(kind)));
  for (auto _ : state)
    benchmark::DoNotOptimize(m::similarity(kind, kLeft, kRight));
}
BENCHMARK(BM_Metric)->DenseRange(0, static_cast<int>(m::kAllMetrics.size()) - 1);

void BM_LevenshteinLength(benchmark::State &state) {
  const std::string a(static_cast<std::size_t>(state.range(0)), 'a');
  std::string b = a;
  b[b.size() / 2] = 'b';
  for (auto _ : state)
    benchmark::DoNotOptimize(m::levenshtein(a, b));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_LevenshteinLength)->RangeMultiplier(4)->Range(8, 512)->Complexity();

void BM_Normalize(benchmark::State &state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(m::apply_normalization("JPMORGAN  CHASE\tBANK NA", {true, true}));
}
BENCHMARK(BM_Normalize);

} // namespace
