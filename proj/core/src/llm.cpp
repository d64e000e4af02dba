#include "fuzzymatch/llm.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <thread>

#include "fuzzymatch/errors.hpp"

namespace fuzzymatch::llm {

namespace {

constexpr int kMaxBackoffMs = 30'000;

ChatRequest make_request(const LlmConfig &config, const PromptTemplate &tmpl,
                         const PairRecord &pair) {
  RenderedPrompt msgs = render_messages(tmpl, pair);
  return ChatRequest{config.model_id, config.temperature, std::move(msgs.system),
                     std::move(msgs.user), config.max_output_tokens};
}

// Returns the reply; `calls` counts every provider invocation.
std::string call_with_retries(ChatProvider &provider, const LlmConfig &config,
                              const ChatRequest &request, int &calls) {
  int backoff = config.initial_backoff_ms;
  for (int attempt = 0;; ++attempt) {
    try {
      ++calls;
      return provider.complete(request);
    } catch (const ProviderError &e) {
      if (!e.retryable() || attempt >= config.max_retries)
        throw TransportError(std::string(e.what()) + " (after " +
                                 std::to_string(calls) + " attempt" +
                                 (calls == 1 ? "" : "s") + ")",
                             calls);
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(backoff));
    backoff = std::min(backoff * 2, kMaxBackoffMs);
  }
}

} // namespace

void LlmConfig::validate() const {
  if (model_id.empty())
    throw ConfigError("model_id: must not be empty");
  if (!(temperature >= 0.0) || !std::isfinite(temperature))
    throw ConfigError("temperature: must be a finite value >= 0");
  if (max_output_tokens < 1)
    throw ConfigError("max_output_tokens: must be >= 1");
  if (max_concurrency < 1)
    throw ConfigError("max_concurrency: must be >= 1");
  if (max_retries < 0)
    throw ConfigError("max_retries: must be >= 0");
  if (initial_backoff_ms < 1)
    throw ConfigError("initial_backoff_ms: must be >= 1");
  if (api_key_env.empty())
    throw ConfigError("api_key_env: must not be empty");
}

std::string format_temperature(double temperature) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", temperature);
  std::string s(buf);
  while (s.size() > 1 && s.back() == '0' && s[s.size() - 2] != '.')
    s.pop_back();
  return s;
}

std::string llm_scorer_id(const LlmConfig &config) {
  return config.model_id + "@T" + format_temperature(config.temperature);
}

PairScoreDetail score_pair_detailed(ChatProvider &provider,
                                    const LlmConfig &config,
                                    const PromptTemplate &tmpl,
                                    const PairRecord &pair) {
  const ChatRequest request = make_request(config, tmpl, pair);
  PairScoreDetail detail;
  detail.raw_reply = call_with_retries(provider, config, request,
                                       detail.provider_calls);
  const Confidence c = parse_confidence(detail.raw_reply);
  detail.score = c.value;
  detail.lenient = c.lenient;
  return detail;
}

ScoredPair score_pair(ChatProvider &provider, const LlmConfig &config,
                      const PromptTemplate &tmpl, const PairRecord &pair) {
  config.validate();
  const auto detail = score_pair_detailed(provider, config, tmpl, pair);
  return ScoredPair(pair, detail.score, llm_scorer_id(config));
}

std::vector<std::pair<std::size_t, std::string>>
BatchResult::error_manifest() const {
  std::vector<std::pair<std::size_t, std::string>> out;
  for (std::size_t i = 0; i < outcomes.size(); ++i)
    if (!outcomes[i].ok())
      out.emplace_back(i, outcomes[i].error);
  return out;
}

BatchResult score_batch(ChatProvider &provider, const LlmConfig &config,
                        const PromptTemplate &tmpl,
                        const std::vector<PairRecord> &pairs,
                        cache::ScoreCache *cache) {
  config.validate();
  const std::string scorer_id = llm_scorer_id(config);

  BatchResult result;
  result.outcomes.resize(pairs.size());
  if (pairs.empty())
    return result;

  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> cache_hits{0}, calls{0}, lenient{0};

  auto work = [&] {
    for (std::size_t i = next++; i < pairs.size(); i = next++) {
      ScoreOutcome &out = result.outcomes[i];
      out.pair = pairs[i];
      out.scorer_id = scorer_id;
      try {
        const ChatRequest request = make_request(config, tmpl, pairs[i]);
        std::optional<cache::CacheKey> key;
        if (cache) {
          key = cache::CacheKey::for_request(
              config.model_id, config.temperature, request.prompt_text());
          if (auto hit = cache->get(*key)) {
            out.score = hit->score;
            ++cache_hits;
            continue;
          }
        }
        int n = 0;
        std::string raw;
        try {
          raw = call_with_retries(provider, config, request, n);
        } catch (...) {
          calls += static_cast<std::size_t>(n);
          throw;
        }
        calls += static_cast<std::size_t>(n);
        const Confidence c = parse_confidence(raw);
        if (c.lenient)
          ++lenient;
        out.score = c.value;
        if (cache)
          cache->put({*key, c.value, std::move(raw), cache::utc_timestamp()});
      } catch (const std::exception &e) {
        out.error = e.what();
      }
    }
  };

  const auto workers = std::min<std::size_t>(
      static_cast<std::size_t>(config.max_concurrency), pairs.size());
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back(work);
  }

  for (const auto &o : result.outcomes)
    (o.ok() ? result.summary.successes : result.summary.failures)++;
  result.summary.cache_hits = cache_hits;
  result.summary.provider_calls = calls;
  result.summary.leniency_count = lenient;
  return result;
}

double LlmScorer::score(const PairRecord &pair) const {
  return llm::score_pair(provider_, config_, tmpl_, pair).score();
}

} // namespace fuzzymatch::llm
