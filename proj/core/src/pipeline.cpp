#include "fuzzymatch/pipeline.hpp"

#include <algorithm>

#include "fuzzymatch/errors.hpp"

namespace fuzzymatch::pipeline {

void PipelineConfig::validate() const {
  if (top_k < 1)
    throw ConfigError("top_k: must be >= 1");
  if (const auto *model =
          std::get_if<std::shared_ptr<const ensemble::EnsembleModel>>(&stage1);
      model && !*model)
    throw ConfigError("stage1: ensemble model is not loaded");
  llm.validate();
}

std::unique_ptr<Scorer> make_stage1_scorer(const Stage1 &stage1) {
  if (const auto *kind = std::get_if<metrics::MetricKind>(&stage1))
    return std::make_unique<metrics::MetricScorer>(*kind);
  const auto &model = std::get<std::shared_ptr<const ensemble::EnsembleModel>>(stage1);
  if (!model)
    throw ConfigError("stage1: ensemble model is not loaded");
  return std::make_unique<ensemble::EnsembleScorer>(*model);
}

std::string pipeline_scorer_id(const PipelineConfig &config) {
  return "pipeline:" + make_stage1_scorer(config.stage1)->scorer_id() + ">" +
         llm::llm_scorer_id(config.llm);
}

std::vector<ScoredPair> stage1_rank(const std::vector<PairRecord> &pairs,
                                    const Scorer &stage1) {
  return rank_by_score(score_all(stage1, pairs));
}

PipelineResult run_pipeline(const std::vector<PairRecord> &pairs,
                            const PipelineConfig &config,
                            llm::ChatProvider &provider,
                            cache::ScoreCache *cache) {
  config.validate();
  const auto stage1 = make_stage1_scorer(config.stage1);
  const std::string id = pipeline_scorer_id(config);

  const std::vector<ScoredPair> scored1 = score_all(*stage1, pairs);
  const std::size_t k = std::min(config.top_k, pairs.size());

  // Input positions in stage-1 rank order (core tie rule).
  std::vector<std::size_t> order(pairs.size());
  for (std::size_t i = 0; i < order.size(); ++i)
    order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto &x = scored1[a], &y = scored1[b];
    if (x.score() != y.score())
      return x.score() > y.score();
    if (x.pair().id != y.pair().id)
      return x.pair().id < y.pair().id;
    return a < b;
  });

  std::vector<PairRecord> top;
  top.reserve(k);
  for (std::size_t r = 0; r < k; ++r)
    top.push_back(pairs[order[r]]);

  llm::BatchResult batch = llm::score_batch(provider, config.llm, config.prompt,
                                            top, cache);

  PipelineResult result;
  result.stage2 = batch.summary;
  result.stage2_attempts = k;
  result.outcomes.resize(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto &out = result.outcomes[i];
    out.pair = pairs[i];
    out.scorer_id = id;
    out.score = config.below_k_policy == BelowKPolicy::FloorToZero
                    ? 0.0
                    : scored1[i].score();
  }
  for (std::size_t r = 0; r < k; ++r) {
    auto &out = result.outcomes[order[r]];
    out.score = batch.outcomes[r].score;
    out.error = batch.outcomes[r].error;
  }
  return result;
}

} // namespace fuzzymatch::pipeline
