#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "fuzzymatch/cache.hpp"
#include "fuzzymatch/confidence.hpp"
#include "fuzzymatch/prompt.hpp"
#include "fuzzymatch/provider.hpp"
#include "fuzzymatch/types.hpp"

namespace fuzzymatch::llm {

inline constexpr const char *kDefaultModel = "gpt-4-0613";
inline constexpr const char *kDefaultApiKeyEnv = "OPENAI_API_KEY";

struct LlmConfig {
  std::string model_id = kDefaultModel;
  double temperature = 0.2;
  int max_output_tokens = 8;
  int max_concurrency = 4;
  int max_retries = 3;
  int initial_backoff_ms = 500;
  std::string api_key_env = kDefaultApiKeyEnv;

  // Throws ConfigError naming the offending field.
  void validate() const;
};

// "0.2", "1.0": shortest form with at least one decimal digit.
std::string format_temperature(double temperature);

// model_id + "@T" + temperature, e.g. "gpt-4-0613@T0.2".
std::string llm_scorer_id(const LlmConfig &config);

struct PairScoreDetail {
  double score = 0.0;
  std::string raw_reply;
  bool lenient = false;
  int provider_calls = 0;
};

// One rendered prompt, one provider call plus retries with exponential
// backoff. Throws TransportError once retries are exhausted (or immediately
// for a non-retryable provider error) and ReplyParseError on a bad reply.
PairScoreDetail score_pair_detailed(ChatProvider &provider,
                                    const LlmConfig &config,
                                    const PromptTemplate &tmpl,
                                    const PairRecord &pair);

ScoredPair score_pair(ChatProvider &provider, const LlmConfig &config,
                      const PromptTemplate &tmpl, const PairRecord &pair);

struct BatchSummary {
  std::size_t successes = 0;
  std::size_t failures = 0;
  std::size_t cache_hits = 0;
  std::size_t provider_calls = 0;
  std::size_t leniency_count = 0;
};

struct BatchResult {
  std::vector<ScoreOutcome> outcomes; // input order
  BatchSummary summary;

  // Index and message of every failed pair.
  std::vector<std::pair<std::size_t, std::string>> error_manifest() const;
};

// Scores every pair with at most config.max_concurrency provider calls in
// flight. Per-pair failures become error outcomes; only an invalid config or
// template throws.
BatchResult score_batch(ChatProvider &provider, const LlmConfig &config,
                        const PromptTemplate &tmpl,
                        const std::vector<PairRecord> &pairs,
                        cache::ScoreCache *cache = nullptr);

// Scorer adapter. Not deterministic unless the provider is deterministic or
// the temperature is 0.
class LlmScorer : public Scorer {
public:
  LlmScorer(ChatProvider &provider, LlmConfig config, PromptTemplate tmpl)
      : provider_(provider), config_(std::move(config)), tmpl_(std::move(tmpl)) {}

  double score(const PairRecord &pair) const override;
  std::string scorer_id() const override { return llm_scorer_id(config_); }
  bool deterministic() const override {
    return provider_.deterministic() || config_.temperature == 0.0;
  }

private:
  ChatProvider &provider_;
  LlmConfig config_;
  PromptTemplate tmpl_;
};

} // namespace fuzzymatch::llm
