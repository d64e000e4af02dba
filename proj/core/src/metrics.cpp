#include "fuzzymatch/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "fuzzymatch/errors.hpp"
#include "fuzzymatch/utf8.hpp"

namespace fuzzymatch::metrics {

namespace {

using U32 = std::u32string;
using U32View = std::u32string_view;

std::size_t levenshtein_u32(U32View a, U32View b) {
  if (a.size() < b.size())
    std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j)
    row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      const std::size_t sub = diag + (a[i - 1] == b[j - 1] ? 0 : 1);
      row[j] = std::min({up + 1, row[j - 1] + 1, sub});
      diag = up;
    }
  }
  return row[b.size()];
}

double jaro_u32(U32View a, U32View b) {
  if (a.empty() && b.empty())
    return 1.0;
  if (a.empty() || b.empty())
    return 0.0;
  // Greedy matching is order dependent; fix the order so jaro(a,b) == jaro(b,a).
  if (b.size() < a.size() || (a.size() == b.size() && b < a))
    std::swap(a, b);
  const std::size_t longest = std::max(a.size(), b.size());
  const std::size_t window = longest / 2 >= 1 ? longest / 2 - 1 : 0;

  std::vector<bool> a_matched(a.size(), false), b_matched(b.size(), false);
  std::size_t matches = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::size_t lo = i > window ? i - window : 0;
    const std::size_t hi = std::min(i + window + 1, b.size());
    for (std::size_t j = lo; j < hi; ++j) {
      if (!b_matched[j] && a[i] == b[j]) {
        a_matched[i] = b_matched[j] = true;
        ++matches;
        break;
      }
    }
  }
  if (matches == 0)
    return 0.0;

  std::size_t out_of_order = 0;
  std::size_t k = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a_matched[i])
      continue;
    while (!b_matched[k])
      ++k;
    if (a[i] != b[k])
      ++out_of_order;
    ++k;
  }
  const double m = static_cast<double>(matches);
  const double t = static_cast<double>(out_of_order) / 2.0;
  return (m / static_cast<double>(a.size()) + m / static_cast<double>(b.size()) +
          (m - t) / m) /
         3.0;
}

double jaro_winkler_u32(U32View a, U32View b) {
  const double j = jaro_u32(a, b);
  std::size_t prefix = 0;
  const std::size_t cap = std::min({kWinklerPrefixCap, a.size(), b.size()});
  while (prefix < cap && a[prefix] == b[prefix])
    ++prefix;
  return j + static_cast<double>(prefix) * kWinklerPrefixScale * (1.0 - j);
}

template <typename Set> double jaccard_of(const Set &x, const Set &y) {
  if (x.empty() && y.empty())
    return 1.0;
  std::size_t common = 0;
  for (const auto &v : x)
    common += y.count(v);
  const std::size_t uni = x.size() + y.size() - common;
  return static_cast<double>(common) / static_cast<double>(uni);
}

std::set<U32> ngram_set(const U32 &s, std::size_t n) {
  std::set<U32> out;
  if (s.size() < n)
    return out;
  for (std::size_t i = 0; i + n <= s.size(); ++i)
    out.insert(s.substr(i, n));
  return out;
}

std::size_t lcs_u32(U32View a, U32View b) {
  if (a.empty() || b.empty())
    return 0;
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  std::size_t best = 0;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : 0;
      best = std::max(best, cur[j]);
    }
    std::swap(prev, cur);
  }
  return best;
}

} // namespace

std::string_view metric_name(MetricKind kind) {
  switch (kind) {
  case MetricKind::LevenshteinSim:
    return "levenshtein_sim";
  case MetricKind::Jaro:
    return "jaro";
  case MetricKind::JaroWinkler:
    return "jaro_winkler";
  case MetricKind::JaccardChar:
    return "jaccard_char";
  case MetricKind::JaccardBigram:
    return "jaccard_bigram";
  case MetricKind::CosineLetterFreq:
    return "cosine_letter_freq";
  case MetricKind::LcsOverlap:
    return "lcs_overlap";
  }
  return "unknown";
}

std::optional<MetricKind> parse_metric(std::string_view name) {
  for (MetricKind k : kAllMetrics)
    if (metric_name(k) == name)
      return k;
  return std::nullopt;
}

std::string apply_normalization(std::string_view s,
                                const NormalizationPolicy &policy) {
  if (policy.is_identity())
    return std::string(s);
  const U32 in = utf8::decode(s);
  U32 out;
  out.reserve(in.size());
  bool in_run = false;
  for (char32_t c : in) {
    if (policy.strip_whitespace_runs && utf8::is_whitespace(c)) {
      if (!in_run)
        out.push_back(U' ');
      in_run = true;
      continue;
    }
    in_run = false;
    out.push_back(policy.case_fold ? utf8::fold_case(c) : c);
  }
  return utf8::encode(out);
}

std::size_t levenshtein(std::string_view a, std::string_view b) {
  return levenshtein_u32(utf8::decode(a), utf8::decode(b));
}

double levenshtein_sim(std::string_view a, std::string_view b) {
  const U32 x = utf8::decode(a), y = utf8::decode(b);
  const std::size_t longest = std::max(x.size(), y.size());
  if (longest == 0)
    return 1.0;
  return 1.0 - static_cast<double>(levenshtein_u32(x, y)) /
                   static_cast<double>(longest);
}

double jaro(std::string_view a, std::string_view b) {
  return jaro_u32(utf8::decode(a), utf8::decode(b));
}

double jaro_winkler(std::string_view a, std::string_view b) {
  return jaro_winkler_u32(utf8::decode(a), utf8::decode(b));
}

double jaccard_char(std::string_view a, std::string_view b) {
  const U32 x = utf8::decode(a), y = utf8::decode(b);
  return jaccard_of(std::set<char32_t>(x.begin(), x.end()),
                    std::set<char32_t>(y.begin(), y.end()));
}

double jaccard_ngram(std::string_view a, std::string_view b, std::size_t n) {
  if (n == 0)
    throw ConfigError("jaccard_ngram: n must be >= 1");
  return jaccard_of(ngram_set(utf8::decode(a), n),
                    ngram_set(utf8::decode(b), n));
}

double cosine_letter_freq(std::string_view a, std::string_view b) {
  auto counts = [](std::string_view s) {
    std::map<char32_t, double> m;
    for (char32_t c : utf8::decode(s))
      if (!utf8::is_whitespace(c))
        m[c] += 1.0;
    return m;
  };
  const auto x = counts(a), y = counts(b);
  if (x.empty() && y.empty())
    return 1.0;
  if (x.empty() || y.empty())
    return 0.0;
  double dot = 0.0, nx = 0.0, ny = 0.0;
  for (const auto &[c, v] : x) {
    nx += v * v;
    if (auto it = y.find(c); it != y.end())
      dot += v * it->second;
  }
  for (const auto &[c, v] : y)
    ny += v * v;
  // sqrt of a product of integers is exact when the vectors are equal.
  return std::clamp(dot / std::sqrt(nx * ny), 0.0, 1.0);
}

std::size_t longest_common_substring(std::string_view a, std::string_view b) {
  return lcs_u32(utf8::decode(a), utf8::decode(b));
}

double lcs_overlap_sim(std::string_view a, std::string_view b) {
  const U32 x = utf8::decode(a), y = utf8::decode(b);
  if (x.empty() && y.empty())
    return 1.0;
  if (x.empty() || y.empty())
    return 0.0;
  return static_cast<double>(lcs_u32(x, y)) /
         static_cast<double>(std::min(x.size(), y.size()));
}

double length_ratio(std::string_view a, std::string_view b) {
  const std::size_t x = utf8::decode(a).size(), y = utf8::decode(b).size();
  if (x == 0 && y == 0)
    return 1.0;
  return static_cast<double>(std::min(x, y)) /
         static_cast<double>(std::max(x, y));
}

double similarity(MetricKind kind, std::string_view a, std::string_view b) {
  switch (kind) {
  case MetricKind::LevenshteinSim:
    return levenshtein_sim(a, b);
  case MetricKind::Jaro:
    return jaro(a, b);
  case MetricKind::JaroWinkler:
    return jaro_winkler(a, b);
  case MetricKind::JaccardChar:
    return jaccard_char(a, b);
  case MetricKind::JaccardBigram:
    return jaccard_ngram(a, b, 2);
  case MetricKind::CosineLetterFreq:
    return cosine_letter_freq(a, b);
  case MetricKind::LcsOverlap:
    return lcs_overlap_sim(a, b);
  }
  throw ConfigError("unknown metric kind");
}

double MetricScorer::score(const PairRecord &pair) const {
  if (policy_.is_identity())
    return similarity(kind_, pair.left, pair.right);
  return similarity(kind_, apply_normalization(pair.left, policy_),
                    apply_normalization(pair.right, policy_));
}

std::string MetricScorer::scorer_id() const {
  std::string id(metric_name(kind_));
  if (policy_.case_fold)
    id += "+fold";
  if (policy_.strip_whitespace_runs)
    id += "+ws";
  return id;
}

} // namespace fuzzymatch::metrics
