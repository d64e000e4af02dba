#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fuzzymatch/errors.hpp"
#include "fuzzymatch/metrics.hpp"
#include "fuzzymatch/utf8.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

namespace m = fuzzymatch::metrics;
using fuzzymatch::utf8::decode;

TEST(Levenshtein, KnownValues) {
  EXPECT_EQ(m::levenshtein("kitten", "sitting"), 3u);
  EXPECT_EQ(m::levenshtein("", "abc"), 3u);
  EXPECT_EQ(m::levenshtein("same", "same"), 0u);
  // One scalar value, several bytes.
  EXPECT_EQ(m::levenshtein("caf\xC3\xA9", "cafe"), 1u);
}

TEST(Levenshtein, ExhaustiveAgainstRecursiveDefinition) {
  const auto strings = testsupport::all_strings("abc", 4);
  ASSERT_EQ(strings.size(), 121u);
  for (const auto &a : strings) {
    for (const auto &b : strings) {
      const auto d = m::levenshtein(a, b);
      ASSERT_EQ(d, oracle::levenshtein_naive(decode(a), decode(b))) << a << "|" << b;
      ASSERT_EQ(d == 0, a == b);
    }
  }
}

TEST(Levenshtein, TriangleInequalityExhaustive) {
  const auto strings = testsupport::all_strings("abc", 3);
  for (const auto &a : strings)
    for (const auto &b : strings)
      for (const auto &c : strings)
        ASSERT_LE(m::levenshtein(a, c), m::levenshtein(a, b) + m::levenshtein(b, c));
}

TEST(LevenshteinSim, KnownValues) {
  EXPECT_NEAR(m::levenshtein_sim("kitten", "sitting"), 1.0 - 3.0 / 7.0, 1e-12);
  EXPECT_EQ(m::levenshtein_sim("abc", "abc"), 1.0);
  EXPECT_EQ(m::levenshtein_sim("", ""), 1.0);
}

TEST(Jaro, KnownValues) {
  // m = 6, t = 1: (6/6 + 6/6 + 5/6) / 3
  EXPECT_NEAR(m::jaro("MARTHA", "MARHTA"), (1.0 + 1.0 + 5.0 / 6.0) / 3.0, 1e-12);
  EXPECT_NEAR(m::jaro("MARTHA", "MARHTA"), 0.944444, 1e-6);
  EXPECT_EQ(m::jaro("abc", "abc"), 1.0);
  EXPECT_EQ(m::jaro("abc", "xyz"), 0.0);
  EXPECT_EQ(m::jaro("", ""), 1.0);
  EXPECT_EQ(m::jaro("", "a"), 0.0);
}

TEST(JaroWinkler, KnownValues) {
  const double j = (1.0 + 1.0 + 5.0 / 6.0) / 3.0;
  EXPECT_NEAR(m::jaro_winkler("MARTHA", "MARHTA"), j + 3 * 0.1 * (1 - j), 1e-12);
  EXPECT_NEAR(m::jaro_winkler("MARTHA", "MARHTA"), 0.961111, 1e-6);
  EXPECT_EQ(m::jaro_winkler("abc", "abc"), 1.0);
  EXPECT_EQ(m::jaro_winkler("abc", "xyz"), 0.0);
}

TEST(JaroWinkler, SamplePairValuesMatchIndependentReference) {
  // Frozen from a separate reference implementation of the same formulas.
  EXPECT_NEAR(m::jaro_winkler("JPMORGAN CHASE BANK NA", "jp morgan chase"), 0.408081, 1e-6);
  EXPECT_NEAR(m::jaro_winkler("roadway express inc", "motion picture assn"), 0.584211, 1e-6);
  EXPECT_NEAR(m::jaro_winkler("Chuck Fleischmann (R)", "Charles Fleischmann (R)"), 0.859489, 1e-6);
  EXPECT_NEAR(m::jaro_winkler("Brad Sherman (D)", "Howard Berman (D)"), 0.851891, 1e-6);
}

TEST(JaroWinkler, PrefixBoostIsCappedAtFour) {
  const double j = m::jaro("abcdefgh", "abcdefgx");
  EXPECT_NEAR(m::jaro_winkler("abcdefgh", "abcdefgx"), j + 4 * 0.1 * (1 - j), 1e-12);
}

TEST(JaccardChar, KnownValues) {
  EXPECT_DOUBLE_EQ(m::jaccard_char("abc", "bcd"), 0.5);
  EXPECT_EQ(m::jaccard_char("abc", "cba"), 1.0);
  EXPECT_EQ(m::jaccard_char("ab", "cd"), 0.0);
  EXPECT_EQ(m::jaccard_char("", ""), 1.0);
}

TEST(JaccardNgram, KnownValues) {
  EXPECT_DOUBLE_EQ(m::jaccard_ngram("abcd", "bcda", 2), 0.5);
  EXPECT_EQ(m::jaccard_ngram("abcd", "abcd", 2), 1.0);
  EXPECT_EQ(m::jaccard_ngram("a", "ab", 2), 0.0);
  EXPECT_EQ(m::jaccard_ngram("a", "b", 2), 1.0); // both n-gram sets empty
  EXPECT_THROW(m::jaccard_ngram("a", "b", 0), fuzzymatch::ConfigError);
}

TEST(CosineLetterFreq, KnownValues) {
  EXPECT_DOUBLE_EQ(m::cosine_letter_freq("ab", "ba"), 1.0);
  EXPECT_NEAR(m::cosine_letter_freq("aa", "ab"), 2.0 / (2.0 * std::sqrt(2.0)), 1e-12);
  EXPECT_EQ(m::cosine_letter_freq("a", "b"), 0.0);
  EXPECT_EQ(m::cosine_letter_freq("", "  "), 1.0);
  EXPECT_EQ(m::cosine_letter_freq("", "a"), 0.0);
}

TEST(CosineLetterFreq, IgnoresWhitespace) {
  EXPECT_DOUBLE_EQ(m::cosine_letter_freq("jp morgan", "jpmorgan"), 1.0);
  EXPECT_DOUBLE_EQ(m::cosine_letter_freq("a\tb\n", "ab"), 1.0);
}

TEST(CosineLetterFreq, PermutationInvariant) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 500; ++i) {
    const auto a = testsupport::random_unicode(rng, 12);
    const auto b = testsupport::random_unicode(rng, 12);
    auto u = decode(a);
    std::shuffle(u.begin(), u.end(), rng);
    EXPECT_EQ(m::cosine_letter_freq(a, b),
              m::cosine_letter_freq(fuzzymatch::utf8::encode(u), b));
  }
}

TEST(LongestCommonSubstring, KnownValues) {
  EXPECT_EQ(m::longest_common_substring("jpmorgan chase", "jp morgan chase"), 12u);
  EXPECT_EQ(m::longest_common_substring("hello", "hello"), 5u);
  EXPECT_EQ(m::longest_common_substring("abc", "xyz"), 0u);
}

TEST(LongestCommonSubstring, ExhaustiveAgainstBruteForce) {
  const auto strings = testsupport::all_strings("abc", 4);
  for (const auto &a : strings)
    for (const auto &b : strings)
      ASSERT_EQ(m::longest_common_substring(a, b),
                oracle::lcs_bruteforce(decode(a), decode(b)))
          << a << "|" << b;
}

TEST(LcsOverlapSim, KnownValues) {
  EXPECT_NEAR(m::lcs_overlap_sim("jpmorgan chase", "jp morgan chase"), 12.0 / 14.0, 1e-12);
  EXPECT_EQ(m::lcs_overlap_sim("abc", "abc"), 1.0);
  EXPECT_EQ(m::lcs_overlap_sim("", "abc"), 0.0);
  EXPECT_EQ(m::lcs_overlap_sim("", ""), 1.0);
}

TEST(Normalization, Policies) {
  const m::NormalizationPolicy both{true, true};
  EXPECT_EQ(m::apply_normalization("JPMORGAN  CHASE", both), "jpmorgan chase");
  EXPECT_EQ(m::apply_normalization("A\t B", both), "a b");
  EXPECT_EQ(m::apply_normalization("Mixed  Case", {}), "Mixed  Case");
  EXPECT_EQ(m::apply_normalization("\xC3\x89" "COLE", {true, false}), "\xC3\xA9" "cole");
}

TEST(Normalization, Idempotent) {
  std::mt19937_64 rng(3);
  for (const m::NormalizationPolicy p :
       {m::NormalizationPolicy{true, false}, m::NormalizationPolicy{false, true},
        m::NormalizationPolicy{true, true}}) {
    for (int i = 0; i < 500; ++i) {
      const auto s = testsupport::random_unicode(rng, 16);
      const auto once = m::apply_normalization(s, p);
      EXPECT_EQ(m::apply_normalization(once, p), once);
    }
  }
}

TEST(Metrics, RangeSymmetryIdentityOnRandomUnicode) {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 3000; ++i) {
    const auto a = testsupport::random_unicode(rng, 10);
    const auto b = testsupport::random_unicode(rng, 10);
    for (auto kind : m::kAllMetrics) {
      const double ab = m::similarity(kind, a, b);
      ASSERT_GE(ab, 0.0);
      ASSERT_LE(ab, 1.0);
      ASSERT_EQ(ab, m::similarity(kind, b, a)) << m::metric_name(kind);
      ASSERT_EQ(m::similarity(kind, a, a), 1.0) << m::metric_name(kind) << " " << a;
    }
    ASSERT_EQ(m::levenshtein(a, b), m::levenshtein(b, a));
    ASSERT_EQ(m::longest_common_substring(a, b), m::longest_common_substring(b, a));
  }
}

TEST(MetricScorer, IdsAndNames) {
  for (auto kind : m::kAllMetrics) {
    EXPECT_EQ(m::parse_metric(m::metric_name(kind)), kind);
    EXPECT_EQ(m::MetricScorer(kind).scorer_id(), m::metric_name(kind));
  }
  EXPECT_FALSE(m::parse_metric("soundex"));
  EXPECT_EQ(m::MetricScorer(m::MetricKind::Jaro, {true, true}).scorer_id(),
            "jaro+fold+ws");
}

TEST(MetricScorer, AppliesNormalization) {
  const fuzzymatch::PairRecord p{"JP Morgan", "jp  morgan"};
  EXPECT_LT(m::MetricScorer(m::MetricKind::LevenshteinSim).score(p), 1.0);
  EXPECT_EQ(m::MetricScorer(m::MetricKind::LevenshteinSim, {true, true}).score(p), 1.0);
}

TEST(Utf8, DecodesAndReplacesInvalidBytes) {
  EXPECT_EQ(decode("a\xC3\xA9"), U"aé");
  EXPECT_EQ(decode("\xF0\x9F\x98\x80"), U"\U0001F600");
  EXPECT_EQ(decode("\xFF"), U"�");
  EXPECT_EQ(decode("\xE2\x82"), U"�"); // truncated
  EXPECT_EQ(decode("\xED\xA0\x80"), U"���"); // surrogate
  EXPECT_EQ(fuzzymatch::utf8::encode(decode("h\xC3\xA9llo \xE4\xB8\x96")),
            "h\xC3\xA9llo \xE4\xB8\x96");
}
