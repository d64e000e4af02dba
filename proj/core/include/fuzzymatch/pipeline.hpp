#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "fuzzymatch/cache.hpp"
#include "fuzzymatch/ensemble.hpp"
#include "fuzzymatch/llm.hpp"
#include "fuzzymatch/metrics.hpp"

// Two-stage matching: a cheap scorer ranks every pair, the LLM re-scores only
// the top k.
namespace fuzzymatch::pipeline {

enum class BelowKPolicy {
  KeepStage1Score, // mixes score scales; exploratory use only
  FloorToZero,
};

using Stage1 =
    std::variant<metrics::MetricKind, std::shared_ptr<const ensemble::EnsembleModel>>;

struct PipelineConfig {
  Stage1 stage1 = metrics::MetricKind::CosineLetterFreq;
  std::size_t top_k = 500;
  llm::PromptTemplate prompt = llm::PromptTemplate::plain();
  llm::LlmConfig llm;
  BelowKPolicy below_k_policy = BelowKPolicy::FloorToZero;

  void validate() const;
};

std::unique_ptr<Scorer> make_stage1_scorer(const Stage1 &stage1);

// "pipeline:" + stage-1 id + ">" + stage-2 id.
std::string pipeline_scorer_id(const PipelineConfig &config);

std::vector<ScoredPair> stage1_rank(const std::vector<PairRecord> &pairs,
                                    const Scorer &stage1);

struct PipelineResult {
  std::vector<ScoreOutcome> outcomes; // input order
  llm::BatchSummary stage2;
  std::size_t stage2_attempts = 0; // min(top_k, n)
};

PipelineResult run_pipeline(const std::vector<PairRecord> &pairs,
                            const PipelineConfig &config,
                            llm::ChatProvider &provider,
                            cache::ScoreCache *cache = nullptr);

} // namespace fuzzymatch::pipeline
