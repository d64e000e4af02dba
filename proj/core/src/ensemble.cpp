#include "fuzzymatch/ensemble.hpp"

#include <json.hpp>

#include <algorithm>
#include <numeric>
#include <random>

#include "fuzzymatch/errors.hpp"
#include "fuzzymatch/metrics.hpp"

namespace fuzzymatch::ensemble {

namespace {

using Rng = std::mt19937_64;

// Unbiased draw in [0, n). std::uniform_int_distribution is not specified
// bit-for-bit, so models would differ between standard libraries.
std::uint64_t draw_index(Rng &rng, std::uint64_t n) {
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= threshold)
      return r % n;
  }
}

double gini(double w, double wp) {
  if (w <= 0.0)
    return 0.0;
  const double p = wp / w;
  return 2.0 * p * (1.0 - p);
}

struct Sample {
  const FeatureVector *x;
  int label;
  double weight; // bootstrap multiplicity * class weight
  int count;     // bootstrap multiplicity
};

class TreeBuilder {
public:
  TreeBuilder(const TrainConfig &config, Rng &rng) : config_(config), rng_(rng) {}

  DecisionTree build(std::vector<Sample> samples) {
    tree_.nodes.clear();
    grow(samples, 0);
    return std::move(tree_);
  }

private:
  struct Split {
    int feature = -1;
    double threshold = 0.0;
    double impurity = 0.0;
  };

  int grow(std::vector<Sample> &samples, int depth) {
    double w = 0.0, wp = 0.0;
    int count = 0;
    for (const auto &s : samples) {
      w += s.weight;
      wp += s.label ? s.weight : 0.0;
      count += s.count;
    }
    const int index = static_cast<int>(tree_.nodes.size());
    tree_.nodes.push_back(TreeNode{});
    tree_.nodes[index].value = w > 0.0 ? std::clamp(wp / w, 0.0, 1.0) : 0.0;

    const bool pure = wp == 0.0 || wp == w;
    if (depth >= config_.max_depth || pure || count < 2 * config_.min_leaf)
      return index;

    const Split best = find_split(samples, w * gini(w, wp));
    if (best.feature < 0)
      return index;

    std::vector<Sample> left, right;
    for (const auto &s : samples)
      ((*s.x)[best.feature] <= best.threshold ? left : right).push_back(s);
    samples.clear();
    samples.shrink_to_fit();

    const int l = grow(left, depth + 1);
    const int r = grow(right, depth + 1);
    TreeNode &node = tree_.nodes[index];
    node.feature = best.feature;
    node.threshold = best.threshold;
    node.left = l;
    node.right = r;
    node.value = 0.0;
    return index;
  }

  std::vector<int> candidate_features() {
    std::array<int, kNumFeatures> order;
    std::iota(order.begin(), order.end(), 0);
    const auto k = static_cast<std::size_t>(config_.feature_subsample);
    for (std::size_t i = 0; i < k; ++i) {
      const auto j = i + draw_index(rng_, kNumFeatures - i);
      std::swap(order[i], order[j]);
    }
    std::vector<int> chosen(order.begin(), order.begin() + k);
    std::sort(chosen.begin(), chosen.end());
    return chosen;
  }

  // Lowest weighted child impurity; ties go to the lower feature index, then
  // the lower threshold. Returns feature -1 when nothing beats the parent.
  Split find_split(std::vector<Sample> &samples, double parent_impurity) {
    Split best;
    best.impurity = parent_impurity;
    double total_w = 0.0, total_wp = 0.0;
    int total_count = 0;
    for (const auto &s : samples) {
      total_w += s.weight;
      total_wp += s.label ? s.weight : 0.0;
      total_count += s.count;
    }
    for (int f : candidate_features()) {
      std::stable_sort(samples.begin(), samples.end(),
                       [f](const Sample &a, const Sample &b) {
                         return (*a.x)[f] < (*b.x)[f];
                       });
      double lw = 0.0, lwp = 0.0;
      int lcount = 0;
      for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
        lw += samples[i].weight;
        lwp += samples[i].label ? samples[i].weight : 0.0;
        lcount += samples[i].count;
        const double lo = (*samples[i].x)[f];
        const double hi = (*samples[i + 1].x)[f];
        if (lo == hi)
          continue;
        if (lcount < config_.min_leaf || total_count - lcount < config_.min_leaf)
          continue;
        const double rw = total_w - lw, rwp = total_wp - lwp;
        const double impurity = lw * gini(lw, lwp) + rw * gini(rw, rwp);
        if (impurity < best.impurity) {
          double mid = lo + (hi - lo) / 2.0;
          if (mid >= hi)
            mid = lo;
          best = {f, mid, impurity};
        }
      }
    }
    return best;
  }

  const TrainConfig &config_;
  Rng &rng_;
  DecisionTree tree_;
};

} // namespace

const std::array<std::string_view, kNumFeatures> &feature_schema() {
  static constexpr std::array<std::string_view, kNumFeatures> kSchema = {
      "levenshtein_sim", "jaro",          "jaro_winkler",
      "jaccard_char",    "jaccard_bigram", "cosine_letter_freq",
      "lcs_overlap_sim", "length_ratio",
  };
  return kSchema;
}

FeatureVector extract_features(const PairRecord &pair) {
  const std::string_view a = pair.left, b = pair.right;
  return {
      metrics::levenshtein_sim(a, b),    metrics::jaro(a, b),
      metrics::jaro_winkler(a, b),       metrics::jaccard_char(a, b),
      metrics::jaccard_ngram(a, b, 2),   metrics::cosine_letter_freq(a, b),
      metrics::lcs_overlap_sim(a, b),    metrics::length_ratio(a, b),
  };
}

void TrainConfig::validate() const {
  if (n_trees < 1)
    throw ConfigError("n_trees: must be >= 1");
  if (max_depth < 1)
    throw ConfigError("max_depth: must be >= 1");
  if (min_leaf < 1)
    throw ConfigError("min_leaf: must be >= 1");
  if (feature_subsample < 1 || feature_subsample > static_cast<int>(kNumFeatures))
    throw ConfigError("feature_subsample: must be in [1,8]");
  if (!(positive_weight > 0.0))
    throw ConfigError("positive_weight: must be > 0");
}

double DecisionTree::predict(const FeatureVector &x) const {
  int i = 0;
  while (!nodes[i].is_leaf())
    i = x[nodes[i].feature] <= nodes[i].threshold ? nodes[i].left : nodes[i].right;
  return nodes[i].value;
}

double EnsembleModel::predict_proba(const FeatureVector &x) const {
  double sum = 0.0;
  for (const auto &t : trees)
    sum += t.predict(x);
  return std::clamp(sum / static_cast<double>(trees.size()), 0.0, 1.0);
}

double EnsembleModel::predict_proba(const PairRecord &pair) const {
  return predict_proba(extract_features(pair));
}

std::string EnsembleModel::scorer_id() const {
  return "ensemble:" + std::to_string(train_config.seed);
}

EnsembleModel train_on_features(std::span<const FeatureVector> features,
                                std::span<const int> labels,
                                const TrainConfig &config) {
  config.validate();
  if (features.empty())
    throw TrainingDataError("training data is empty");
  if (features.size() != labels.size())
    throw TrainingDataError("feature and label counts differ");
  std::size_t positives = 0;
  for (int l : labels) {
    if (l != 0 && l != 1)
      throw TrainingDataError("labels must be 0 or 1");
    positives += static_cast<std::size_t>(l);
  }
  if (positives == 0 || positives == labels.size())
    throw TrainingDataError(
        "training data must contain both positive and negative labels");

  Rng rng(config.seed);
  EnsembleModel model;
  model.train_config = config;
  model.trees.reserve(static_cast<std::size_t>(config.n_trees));
  TreeBuilder builder(config, rng);
  const std::size_t n = features.size();

  for (int t = 0; t < config.n_trees; ++t) {
    std::vector<int> counts(n, config.bootstrap ? 0 : 1);
    if (config.bootstrap)
      for (std::size_t i = 0; i < n; ++i)
        ++counts[draw_index(rng, n)];
    std::vector<Sample> samples;
    samples.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (counts[i] == 0)
        continue;
      const double class_weight = labels[i] ? config.positive_weight : 1.0;
      samples.push_back({&features[i], labels[i], counts[i] * class_weight,
                         counts[i]});
    }
    model.trees.push_back(builder.build(std::move(samples)));
  }
  return model;
}

EnsembleModel train(const std::vector<PairRecord> &data,
                    const TrainConfig &config) {
  std::vector<FeatureVector> features;
  std::vector<int> labels;
  features.reserve(data.size());
  labels.reserve(data.size());
  for (const auto &p : data) {
    if (!p.label)
      throw TrainingDataError("training record " + std::to_string(p.id) +
                              " has no label");
    features.push_back(extract_features(p));
    labels.push_back(*p.label);
  }
  return train_on_features(features, labels, config);
}

std::string save_model(const EnsembleModel &model) {
  using nlohmann::json;
  json trees = json::array();
  for (const auto &t : model.trees) {
    json nodes = json::array();
    for (const auto &n : t.nodes) {
      if (n.is_leaf())
        nodes.push_back({{"leaf", n.value}});
      else
        nodes.push_back({{"feature", n.feature},
                         {"threshold", n.threshold},
                         {"left", n.left},
                         {"right", n.right}});
    }
    trees.push_back({{"nodes", std::move(nodes)}});
  }
  const auto &c = model.train_config;
  json doc = {
      {"format_version", kFormatVersion},
      {"feature_schema", feature_schema()},
      {"train_config",
       {{"n_trees", c.n_trees},
        {"max_depth", c.max_depth},
        {"min_leaf", c.min_leaf},
        {"feature_subsample", c.feature_subsample},
        {"bootstrap", c.bootstrap},
        {"positive_weight", c.positive_weight},
        {"seed", c.seed},
        {"rng", kRngAlgorithm}}},
      {"trees", std::move(trees)},
  };
  return doc.dump(1) + "\n";
}

EnsembleModel load_model(std::string_view json_text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception &e) {
    throw ModelFormatError(std::string("malformed model JSON: ") + e.what());
  }
  try {
    const int version = doc.at("format_version").get<int>();
    if (version != kFormatVersion)
      throw ModelFormatError("unsupported model format_version " +
                             std::to_string(version) + " (expected " +
                             std::to_string(kFormatVersion) + ")");
    const auto schema = doc.at("feature_schema").get<std::vector<std::string>>();
    if (!std::equal(schema.begin(), schema.end(), feature_schema().begin(),
                    feature_schema().end()))
      throw ModelFormatError("model feature_schema does not match this build");

    EnsembleModel model;
    const auto &c = doc.at("train_config");
    if (c.value("rng", std::string(kRngAlgorithm)) != kRngAlgorithm)
      throw ModelFormatError("unsupported rng algorithm");
    model.train_config.n_trees = c.at("n_trees").get<int>();
    model.train_config.max_depth = c.at("max_depth").get<int>();
    model.train_config.min_leaf = c.at("min_leaf").get<int>();
    model.train_config.feature_subsample = c.at("feature_subsample").get<int>();
    model.train_config.bootstrap = c.at("bootstrap").get<bool>();
    model.train_config.positive_weight = c.at("positive_weight").get<double>();
    model.train_config.seed = c.at("seed").get<std::uint64_t>();

    for (const auto &t : doc.at("trees")) {
      DecisionTree tree;
      const auto &nodes = t.at("nodes");
      const int n = static_cast<int>(nodes.size());
      for (int i = 0; i < n; ++i) {
        const auto &jn = nodes[static_cast<std::size_t>(i)];
        TreeNode node;
        if (jn.contains("leaf")) {
          node.value = jn.at("leaf").get<double>();
          if (!(node.value >= 0.0 && node.value <= 1.0))
            throw ModelFormatError("leaf value outside [0,1]");
        } else {
          node.feature = jn.at("feature").get<int>();
          node.threshold = jn.at("threshold").get<double>();
          node.left = jn.at("left").get<int>();
          node.right = jn.at("right").get<int>();
          if (node.feature < 0 || node.feature >= static_cast<int>(kNumFeatures))
            throw ModelFormatError("feature index out of range");
          // Children after parents rules out cycles.
          if (node.left <= i || node.right <= i || node.left >= n ||
              node.right >= n)
            throw ModelFormatError("invalid child index in tree node");
        }
        tree.nodes.push_back(node);
      }
      if (tree.nodes.empty())
        throw ModelFormatError("tree has no nodes");
      model.trees.push_back(std::move(tree));
    }
    if (model.trees.empty())
      throw ModelFormatError("model has no trees");
    return model;
  } catch (const json::exception &e) {
    throw ModelFormatError(std::string("invalid model document: ") + e.what());
  }
}

} // namespace fuzzymatch::ensemble
