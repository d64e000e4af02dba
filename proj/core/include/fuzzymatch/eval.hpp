#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "fuzzymatch/types.hpp"

namespace fuzzymatch::eval {

struct PrPoint {
  double threshold = 0.0;
  double precision = 1.0;
  double recall = 0.0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  bool operator==(const PrPoint &) const = default;
};

struct EvalReport {
  std::string scorer_id;
  std::size_t n_pairs = 0;
  std::size_t n_positives = 0;
  double average_precision = 0.0;
  double precision_at_full_recall = 0.0;
  std::vector<PrPoint> pr_curve;
  std::size_t leniency_count = 0;

  bool operator==(const EvalReport &) const = default;
};

// Non-interpolated AP: mean over positives of precision@k at each positive's
// rank, using the rank_by_score order. Throws InputError on an unlabeled pair
// and UndefinedMetricError when there are no positives.
double average_precision(const std::vector<ScoredPair> &scored);

// One point per distinct score, thresholds descending; predicted positive
// means score >= threshold.
std::vector<PrPoint> precision_recall_curve(const std::vector<ScoredPair> &scored);

// Precision of {score >= lowest positive score}.
double precision_at_full_recall(const std::vector<ScoredPair> &scored);

EvalReport build_report(const std::vector<ScoredPair> &scored,
                        const std::string &scorer_id,
                        std::size_t leniency_count = 0);

// Pretty JSON, keys sorted, trailing newline.
std::string report_to_json(const EvalReport &report);
EvalReport report_from_json(const std::string &text);

// threshold,precision,recall,tp,fp,fn with 6-decimal reals.
std::string pr_curve_to_csv(const std::vector<PrPoint> &curve);

} // namespace fuzzymatch::eval
