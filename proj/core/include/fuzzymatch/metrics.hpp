#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "fuzzymatch/types.hpp"

// Character-level string similarity metrics. All functions take UTF-8 and
// operate on Unicode scalar values. Every similarity returns a value in [0,1]
// and equals 1 for identical inputs.
namespace fuzzymatch::metrics {

enum class MetricKind {
  LevenshteinSim,
  Jaro,
  JaroWinkler,
  JaccardChar,
  JaccardBigram,
  CosineLetterFreq,
  LcsOverlap,
};

inline constexpr std::array<MetricKind, 7> kAllMetrics = {
    MetricKind::LevenshteinSim, MetricKind::Jaro,
    MetricKind::JaroWinkler,    MetricKind::JaccardChar,
    MetricKind::JaccardBigram,  MetricKind::CosineLetterFreq,
    MetricKind::LcsOverlap,
};

std::string_view metric_name(MetricKind kind);
std::optional<MetricKind> parse_metric(std::string_view name);

struct NormalizationPolicy {
  bool case_fold = false;
  bool strip_whitespace_runs = false; // collapse whitespace runs to one space

  bool is_identity() const { return !case_fold && !strip_whitespace_runs; }
  bool operator==(const NormalizationPolicy &) const = default;
};

std::string apply_normalization(std::string_view s,
                                const NormalizationPolicy &policy);

std::size_t levenshtein(std::string_view a, std::string_view b);
double levenshtein_sim(std::string_view a, std::string_view b);

double jaro(std::string_view a, std::string_view b);

inline constexpr double kWinklerPrefixScale = 0.1;
inline constexpr std::size_t kWinklerPrefixCap = 4;
double jaro_winkler(std::string_view a, std::string_view b);

double jaccard_char(std::string_view a, std::string_view b);
// Throws ConfigError when n == 0.
double jaccard_ngram(std::string_view a, std::string_view b, std::size_t n = 2);

// Whitespace is not counted.
double cosine_letter_freq(std::string_view a, std::string_view b);

std::size_t longest_common_substring(std::string_view a, std::string_view b);
double lcs_overlap_sim(std::string_view a, std::string_view b);

double similarity(MetricKind kind, std::string_view a, std::string_view b);

// min(|a|,|b|) / max(|a|,|b|) in scalar values; 1 when both are empty.
double length_ratio(std::string_view a, std::string_view b);

class MetricScorer : public Scorer {
public:
  explicit MetricScorer(MetricKind kind, NormalizationPolicy policy = {})
      : kind_(kind), policy_(policy) {}

  double score(const PairRecord &pair) const override;
  std::string scorer_id() const override;

  MetricKind kind() const { return kind_; }

private:
  MetricKind kind_;
  NormalizationPolicy policy_;
};

} // namespace fuzzymatch::metrics
