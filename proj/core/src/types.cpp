#include "fuzzymatch/types.hpp"

#include <algorithm>
#include <string_view>

#include "fuzzymatch/errors.hpp"

namespace fuzzymatch {

namespace {

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
           c == '\v';
  });
}

} // namespace

void validate_pair(const PairRecord &pair) {
  if (is_blank(pair.left))
    throw InputError("pair " + std::to_string(pair.id) +
                     ": left entity is empty");
  if (is_blank(pair.right))
    throw InputError("pair " + std::to_string(pair.id) +
                     ": right entity is empty");
  if (pair.label && *pair.label != 0 && *pair.label != 1)
    throw InvalidLabelError("pair " + std::to_string(pair.id) +
                            ": label must be 0 or 1");
}

ScoredPair::ScoredPair(PairRecord pair, double score, std::string scorer_id)
    : pair_(std::move(pair)), score_(score), scorer_id_(std::move(scorer_id)) {
  // Written so that NaN fails too.
  if (!(score_ >= 0.0 && score_ <= 1.0))
    throw Error("score " + std::to_string(score_) + " for pair " +
                std::to_string(pair_.id) + " is outside [0,1]");
  if (scorer_id_.empty())
    throw Error("scorer id must not be empty");
}

std::vector<ScoredPair> rank_by_score(std::vector<ScoredPair> scored) {
  std::sort(scored.begin(), scored.end(),
            [](const ScoredPair &a, const ScoredPair &b) {
              if (a.score() != b.score())
                return a.score() > b.score();
              return a.pair().id < b.pair().id;
            });
  return scored;
}

std::vector<ScoredPair> score_all(const Scorer &scorer,
                                  const std::vector<PairRecord> &pairs) {
  std::vector<ScoredPair> out;
  out.reserve(pairs.size());
  for (const auto &p : pairs)
    out.push_back(scorer.score_pair(p));
  return out;
}

} // namespace fuzzymatch
