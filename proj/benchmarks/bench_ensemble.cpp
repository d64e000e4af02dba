#include <benchmark/benchmark.h>

#include <random>

#include "fuzzymatch/ensemble.hpp"

namespace en = fuzzymatch::ensemble;

namespace {

std::string word(std::mt19937_64 &rng) {
  std::uniform_int_distribution<int> len(5, 14), ch('a', 'z');
  std::string s(static_cast<std::size_t>(len(rng)), ' ');
  for (auto &c : s)
    c = static_cast<char>(ch(rng));
  return s;
}

std::vector<fuzzymatch::PairRecord> data(std::size_t per_class) {
  std::mt19937_64 rng(3);
  std::vector<fuzzymatch::PairRecord> out;
  for (std::size_t i = 0; i < per_class; ++i) {
    auto s = word(rng);
    out.push_back({s, s + "x", 1, out.size()});
    out.push_back({word(rng), word(rng), 0, out.size()});
  }
  return out;
}

void BM_ExtractFeatures(benchmark::State &state) {
  const fuzzymatch::PairRecord p{"JPMORGAN CHASE BANK NA", "jp morgan chase"};
  for (auto _ : state)
    benchmark::DoNotOptimize(en::extract_features(p));
}
BENCHMARK(BM_ExtractFeatures);

void BM_Train(benchmark::State &state) {
  const auto d = data(static_cast<std::size_t>(state.range(0)));
  en::TrainConfig c;
  for (auto _ : state)
    benchmark::DoNotOptimize(en::train(d, c));
}
BENCHMARK(BM_Train)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_PredictProba(benchmark::State &state) {
  const auto model = en::train(data(500), en::TrainConfig{});
  const auto x = en::extract_features({"Brad Sherman (D)", "Howard Berman (D)"});
  for (auto _ : state)
    benchmark::DoNotOptimize(model.predict_proba(x));
}
BENCHMARK(BM_PredictProba);

} // namespace
