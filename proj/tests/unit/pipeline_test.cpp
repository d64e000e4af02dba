#include <gtest/gtest.h>

#include "fuzzymatch/errors.hpp"
#include "fuzzymatch/metrics.hpp"
#include "fuzzymatch/pipeline.hpp"
#include "test_support.hpp"

using namespace fuzzymatch::pipeline;
using fuzzymatch::PairRecord;
namespace m = fuzzymatch::metrics;

namespace {

std::vector<PairRecord> six_pairs() {
  return {{"MARTHA", "MARHTA", 1, 0},     {"apple", "orange", 0, 1},
          {"jp morgan", "jpmorgan", 1, 2}, {"abc", "xyz", 0, 3},
          {"Dixon", "Dicksonx", 1, 4},    {"kitten", "sitting", 0, 5}};
}

PipelineConfig config(std::size_t k, m::MetricKind stage1 = m::MetricKind::JaroWinkler) {
  PipelineConfig c;
  c.stage1 = stage1;
  c.top_k = k;
  c.llm.initial_backoff_ms = 1;
  return c;
}

} // namespace

TEST(Pipeline, TopKReceivesStage2Scores) {
  const auto pairs = six_pairs();
  testsupport::CountingProvider mock([](const std::string &) { return "1.0"; });
  const auto result = run_pipeline(pairs, config(2), mock);
  EXPECT_EQ(mock.calls(), 2);
  EXPECT_EQ(result.stage2_attempts, 2u);

  // Two highest jaro_winkler pairs, computed independently.
  std::vector<std::pair<double, std::size_t>> jw;
  for (const auto &p : pairs)
    jw.emplace_back(-m::jaro_winkler(p.left, p.right), p.id);
  std::sort(jw.begin(), jw.end());
  for (const auto &o : result.outcomes) {
    const bool top = o.pair.id == jw[0].second || o.pair.id == jw[1].second;
    EXPECT_EQ(*o.score, top ? 1.0 : 0.0) << o.pair.left;
  }
  for (std::size_t i = 0; i < pairs.size(); ++i)
    EXPECT_EQ(result.outcomes[i].pair.id, i);
}

TEST(Pipeline, KeepStage1ScorePolicy) {
  auto c = config(2);
  c.below_k_policy = BelowKPolicy::KeepStage1Score;
  auto mock = fuzzymatch::llm::MockProvider::constant("1.0");
  const auto result = run_pipeline(six_pairs(), c, mock);
  const auto &apple = result.outcomes[1];
  EXPECT_EQ(*apple.score, m::jaro_winkler("apple", "orange"));
}

TEST(Pipeline, FullTopKEqualsScoreBatch) {
  const auto pairs = six_pairs();
  auto mock = fuzzymatch::llm::MockProvider::hashing();
  const auto c = config(100);
  const auto result = run_pipeline(pairs, c, mock);
  const auto batch = fuzzymatch::llm::score_batch(mock, c.llm, c.prompt, pairs);
  EXPECT_EQ(result.stage2_attempts, pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i)
    EXPECT_EQ(*result.outcomes[i].score, *batch.outcomes[i].score);
}

TEST(Pipeline, WarmCacheSkipsStage2Calls) {
  testsupport::TempDir dir;
  fuzzymatch::cache::ScoreCache cache(dir / "c.jsonl");
  testsupport::CountingProvider mock([](const std::string &) { return "0.9"; });
  run_pipeline(six_pairs(), config(3), mock, &cache);
  EXPECT_EQ(mock.calls(), 3);
  mock.reset();
  const auto warm = run_pipeline(six_pairs(), config(3), mock, &cache);
  EXPECT_EQ(mock.calls(), 0);
  EXPECT_EQ(warm.stage2.cache_hits, 3u);
}

TEST(Pipeline, ConfigValidation) {
  EXPECT_THROW(config(0).validate(), fuzzymatch::ConfigError);
  PipelineConfig c = config(1);
  c.stage1 = std::shared_ptr<const fuzzymatch::ensemble::EnsembleModel>();
  EXPECT_THROW(c.validate(), fuzzymatch::ConfigError);
}

TEST(Pipeline, ScorerId) {
  EXPECT_EQ(pipeline_scorer_id(config(5)), "pipeline:jaro_winkler>gpt-4-0613@T0.2");
}

TEST(Stage1Rank, OrdersByScoreThenId) {
  const std::vector<PairRecord> pairs{{"ab", "ab", std::nullopt, 0},
                                      {"ab", "cd", std::nullopt, 1},
                                      {"aab", "abb", std::nullopt, 2}};
  const auto ranked = stage1_rank(pairs, m::MetricScorer(m::MetricKind::CosineLetterFreq));
  ASSERT_EQ(ranked.size(), 3u);
  EXPECT_EQ(ranked[0].pair().id, 0u);
  EXPECT_EQ(ranked[1].pair().id, 2u);
  EXPECT_EQ(ranked[2].pair().id, 1u);

  const std::vector<PairRecord> same{{"x", "x", std::nullopt, 2}, {"x", "x", std::nullopt, 0},
                                     {"x", "x", std::nullopt, 1}};
  const auto tied = stage1_rank(same, m::MetricScorer(m::MetricKind::Jaro));
  EXPECT_EQ(tied[0].pair().id, 0u);
  EXPECT_EQ(tied[2].pair().id, 2u);
}

TEST(Stage1Rank, EnsembleVariant) {
  fuzzymatch::ensemble::TrainConfig tc;
  tc.n_trees = 10;
  tc.seed = 3;
  auto model = std::make_shared<const fuzzymatch::ensemble::EnsembleModel>(
      fuzzymatch::ensemble::train(testsupport::synthetic_separable(8, 50), tc));
  auto scorer = make_stage1_scorer(model);
  const auto ranked = stage1_rank(six_pairs(), *scorer);
  for (std::size_t i = 0; i + 1 < ranked.size(); ++i)
    EXPECT_GE(ranked[i].score(), ranked[i + 1].score());
  EXPECT_EQ(scorer->scorer_id(), "ensemble:3");
}
