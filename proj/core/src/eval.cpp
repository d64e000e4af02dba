#include "fuzzymatch/eval.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>

#include "fuzzymatch/errors.hpp"

namespace fuzzymatch::eval {

namespace {

std::size_t count_positives(const std::vector<ScoredPair> &scored) {
  std::size_t positives = 0;
  for (const auto &s : scored) {
    if (!s.pair().label)
      throw InputError("pair " + std::to_string(s.pair().id) +
                       " has no label; evaluation needs labeled data");
    positives += *s.pair().label == 1 ? 1 : 0;
  }
  if (positives == 0)
    throw UndefinedMetricError("metric undefined: no positive labels");
  return positives;
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

} // namespace

double average_precision(const std::vector<ScoredPair> &scored) {
  const std::size_t positives = count_positives(scored);
  const auto ranked = rank_by_score(scored);
  double sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t k = 0; k < ranked.size(); ++k) {
    if (*ranked[k].pair().label == 1) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(k + 1);
    }
  }
  return sum / static_cast<double>(positives);
}

std::vector<PrPoint> precision_recall_curve(const std::vector<ScoredPair> &scored) {
  const std::size_t positives = count_positives(scored);
  const auto ranked = rank_by_score(scored);
  std::vector<PrPoint> curve;
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    (*ranked[i].pair().label == 1 ? tp : fp)++;
    const bool last_of_threshold =
        i + 1 == ranked.size() || ranked[i + 1].score() != ranked[i].score();
    if (!last_of_threshold)
      continue;
    PrPoint p;
    p.threshold = ranked[i].score();
    p.tp = tp;
    p.fp = fp;
    p.fn = positives - tp;
    p.precision = tp + fp == 0 ? 1.0
                               : static_cast<double>(tp) /
                                     static_cast<double>(tp + fp);
    p.recall = static_cast<double>(tp) / static_cast<double>(positives);
    curve.push_back(p);
  }
  return curve;
}

double precision_at_full_recall(const std::vector<ScoredPair> &scored) {
  count_positives(scored);
  double threshold = 1.0;
  for (const auto &s : scored)
    if (*s.pair().label == 1)
      threshold = std::min(threshold, s.score());
  std::size_t tp = 0, fp = 0;
  for (const auto &s : scored)
    if (s.score() >= threshold)
      (*s.pair().label == 1 ? tp : fp)++;
  return static_cast<double>(tp) / static_cast<double>(tp + fp);
}

EvalReport build_report(const std::vector<ScoredPair> &scored,
                        const std::string &scorer_id,
                        std::size_t leniency_count) {
  EvalReport r;
  r.scorer_id = scorer_id;
  r.n_pairs = scored.size();
  r.n_positives = count_positives(scored);
  r.average_precision = average_precision(scored);
  r.precision_at_full_recall = precision_at_full_recall(scored);
  r.pr_curve = precision_recall_curve(scored);
  r.leniency_count = leniency_count;
  return r;
}

std::string report_to_json(const EvalReport &report) {
  using nlohmann::json;
  json curve = json::array();
  for (const auto &p : report.pr_curve)
    curve.push_back({{"threshold", p.threshold},
                     {"precision", p.precision},
                     {"recall", p.recall},
                     {"tp", p.tp},
                     {"fp", p.fp},
                     {"fn", p.fn}});
  // nlohmann::json objects are std::map backed: keys serialize sorted.
  json doc = {
      {"scorer_id", report.scorer_id},
      {"n_pairs", report.n_pairs},
      {"n_positives", report.n_positives},
      {"average_precision", report.average_precision},
      {"precision_at_full_recall", report.precision_at_full_recall},
      {"pr_curve", std::move(curve)},
      {"leniency_count", report.leniency_count},
  };
  return doc.dump(2, ' ', false, json::error_handler_t::replace) + "\n";
}

EvalReport report_from_json(const std::string &text) {
  using nlohmann::json;
  try {
    const auto doc = json::parse(text);
    EvalReport r;
    r.scorer_id = doc.at("scorer_id").get<std::string>();
    r.n_pairs = doc.at("n_pairs").get<std::size_t>();
    r.n_positives = doc.at("n_positives").get<std::size_t>();
    r.average_precision = doc.at("average_precision").get<double>();
    r.precision_at_full_recall = doc.at("precision_at_full_recall").get<double>();
    r.leniency_count = doc.at("leniency_count").get<std::size_t>();
    for (const auto &jp : doc.at("pr_curve")) {
      PrPoint p;
      p.threshold = jp.at("threshold").get<double>();
      p.precision = jp.at("precision").get<double>();
      p.recall = jp.at("recall").get<double>();
      p.tp = jp.at("tp").get<std::size_t>();
      p.fp = jp.at("fp").get<std::size_t>();
      p.fn = jp.at("fn").get<std::size_t>();
      r.pr_curve.push_back(p);
    }
    return r;
  } catch (const json::exception &e) {
    throw InputError(std::string("invalid report JSON: ") + e.what());
  }
}

std::string pr_curve_to_csv(const std::vector<PrPoint> &curve) {
  std::string out = "threshold,precision,recall,tp,fp,fn\n";
  for (const auto &p : curve) {
    out += fixed6(p.threshold) + "," + fixed6(p.precision) + "," +
           fixed6(p.recall) + "," + std::to_string(p.tp) + "," +
           std::to_string(p.fp) + "," + std::to_string(p.fn) + "\n";
  }
  return out;
}

} // namespace fuzzymatch::eval
