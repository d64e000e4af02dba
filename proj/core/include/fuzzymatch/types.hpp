#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace fuzzymatch {

// One candidate pair. `id` is the 0-based position in the source dataset.
struct PairRecord {
  std::string left;
  std::string right;
  std::optional<int> label; // 1 = same entity, 0 = different
  std::size_t id = 0;

  bool operator==(const PairRecord &) const = default;
};

// Throws InputError if an entity is blank or the label is not 0/1.
void validate_pair(const PairRecord &pair);

// A pair with a score in [0,1]. Construction rejects out-of-range scores and
// an empty scorer id.
class ScoredPair {
public:
  ScoredPair(PairRecord pair, double score, std::string scorer_id);

  const PairRecord &pair() const { return pair_; }
  double score() const { return score_; }
  const std::string &scorer_id() const { return scorer_id_; }

  bool operator==(const ScoredPair &) const = default;

private:
  PairRecord pair_;
  double score_;
  std::string scorer_id_;
};

// Result slot for fallible batch scoring: exactly one of score / error is set.
struct ScoreOutcome {
  PairRecord pair;
  std::string scorer_id;
  std::optional<double> score;
  std::string error;

  bool ok() const { return score.has_value(); }
};

// Maps a pair to a similarity or confidence in [0,1].
class Scorer {
public:
  virtual ~Scorer() = default;

  virtual double score(const PairRecord &pair) const = 0;
  virtual std::string scorer_id() const = 0;

  // False for sampling-based scorers (LLM at temperature > 0).
  virtual bool deterministic() const { return true; }

  ScoredPair score_pair(const PairRecord &pair) const {
    return ScoredPair(pair, score(pair), scorer_id());
  }
};

// Sorts by score descending, ties by ascending pair id. Exact comparisons.
std::vector<ScoredPair> rank_by_score(std::vector<ScoredPair> scored);

// Scores every pair with `scorer`, preserving input order.
std::vector<ScoredPair> score_all(const Scorer &scorer,
                                  const std::vector<PairRecord> &pairs);

} // namespace fuzzymatch
