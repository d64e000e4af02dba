#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fuzzymatch/types.hpp"

// Bagged decision-tree classifier over per-pair string-distance features.
namespace fuzzymatch::ensemble {

inline constexpr std::size_t kNumFeatures = 8;
inline constexpr int kFormatVersion = 1;
inline constexpr std::string_view kRngAlgorithm = "mt19937_64";

using FeatureVector = std::array<double, kNumFeatures>;

// Feature order is part of the model file format.
const std::array<std::string_view, kNumFeatures> &feature_schema();

// [levenshtein_sim, jaro, jaro_winkler, jaccard_char, jaccard_bigram,
//  cosine_letter_freq, lcs_overlap_sim, length_ratio] on the raw strings.
FeatureVector extract_features(const PairRecord &pair);

struct TrainConfig {
  int n_trees = 100;
  int max_depth = 8;
  int min_leaf = 2;
  int feature_subsample = 3; // candidate features drawn per split
  bool bootstrap = true;
  double positive_weight = 1.0;
  std::uint64_t seed = 0;

  void validate() const;
  bool operator==(const TrainConfig &) const = default;
};

// Flat tree. Internal nodes route `x[feature] <= threshold` to `left`.
struct TreeNode {
  int feature = -1; // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0; // leaf: weighted positive-class fraction

  bool is_leaf() const { return feature < 0; }
  bool operator==(const TreeNode &) const = default;
};

struct DecisionTree {
  std::vector<TreeNode> nodes; // nodes[0] is the root

  double predict(const FeatureVector &x) const;
  bool operator==(const DecisionTree &) const = default;
};

struct EnsembleModel {
  std::vector<DecisionTree> trees;
  TrainConfig train_config;

  // Mean leaf value across trees.
  double predict_proba(const FeatureVector &x) const;
  double predict_proba(const PairRecord &pair) const;

  std::string scorer_id() const;
  bool operator==(const EnsembleModel &) const = default;
};

// Throws TrainingDataError when data is empty, single-class, or has an
// unlabeled record.
EnsembleModel train(const std::vector<PairRecord> &data,
                    const TrainConfig &config);

// Same as train() on precomputed features; labels must be 0/1.
EnsembleModel train_on_features(std::span<const FeatureVector> features,
                                std::span<const int> labels,
                                const TrainConfig &config);

// Versioned JSON: {format_version, feature_schema, train_config, trees}.
std::string save_model(const EnsembleModel &model);
// Throws ModelFormatError on malformed JSON, version or schema mismatch.
EnsembleModel load_model(std::string_view json_text);

class EnsembleScorer : public Scorer {
public:
  explicit EnsembleScorer(EnsembleModel model) : model_(std::move(model)) {}

  double score(const PairRecord &pair) const override {
    return model_.predict_proba(pair);
  }
  std::string scorer_id() const override { return model_.scorer_id(); }
  const EnsembleModel &model() const { return model_; }

private:
  EnsembleModel model_;
};

} // namespace fuzzymatch::ensemble
