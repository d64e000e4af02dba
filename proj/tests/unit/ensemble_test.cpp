#include <gtest/gtest.h>

#include <json.hpp>
#include <random>

#include "fuzzymatch/ensemble.hpp"
#include "fuzzymatch/errors.hpp"
#include "fuzzymatch/eval.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace fuzzymatch::ensemble;
using fuzzymatch::PairRecord;
using fuzzymatch::ScoredPair;

namespace {

TrainConfig small_config(std::uint64_t seed = 7) {
  TrainConfig c;
  c.n_trees = 15;
  c.seed = seed;
  return c;
}

double held_out_ap(const EnsembleModel &model, std::uint64_t seed) {
  std::vector<ScoredPair> scored;
  for (auto p : testsupport::synthetic_separable(seed, 100))
    scored.emplace_back(p, model.predict_proba(p), model.scorer_id());
  return fuzzymatch::eval::average_precision(scored);
}

} // namespace

TEST(Features, IdentityAndDisjoint) {
  for (double v : extract_features({"Brad Sherman (D)", "Brad Sherman (D)"}))
    EXPECT_EQ(v, 1.0);
  const auto f = extract_features({"abc", "xyz"});
  EXPECT_EQ(f[1], 0.0); // jaro
  EXPECT_EQ(f[3], 0.0); // jaccard_char
  EXPECT_NEAR(extract_features({"MARTHA", "MARHTA"})[2], 0.961111, 1e-6);
  EXPECT_EQ(feature_schema()[2], "jaro_winkler");
}

TEST(Train, SeparatesSyntheticData) {
  const auto model = train(testsupport::synthetic_separable(1, 100), small_config());
  EXPECT_EQ(held_out_ap(model, 2), 1.0);
  EXPECT_GT(model.predict_proba(PairRecord{"duplicate name", "duplicate name"}), 0.5);
}

TEST(Train, DeterministicForSeed) {
  const auto data = testsupport::synthetic_separable(1, 100);
  const auto a = save_model(train(data, small_config(3)));
  EXPECT_EQ(a, save_model(train(data, small_config(3))));
  EXPECT_NE(a, save_model(train(data, small_config(4))));
}

TEST(Train, RejectsBadData) {
  auto data = testsupport::synthetic_separable(1, 10);
  for (auto &p : data)
    p.label = 0;
  EXPECT_THROW(train(data, small_config()), fuzzymatch::TrainingDataError);
  EXPECT_THROW(train({}, small_config()), fuzzymatch::TrainingDataError);
  data[0].label.reset();
  data[1].label = 1;
  EXPECT_THROW(train(data, small_config()), fuzzymatch::TrainingDataError);
}

TEST(Train, ConfigValidation) {
  TrainConfig c;
  c.n_trees = 0;
  EXPECT_THROW(c.validate(), fuzzymatch::ConfigError);
  c = {};
  c.feature_subsample = 9;
  EXPECT_THROW(c.validate(), fuzzymatch::ConfigError);
  c = {};
  c.positive_weight = 0;
  EXPECT_THROW(c.validate(), fuzzymatch::ConfigError);
}

TEST(Train, DepthOneStumpMatchesExhaustiveSearch) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> grid(0, 9), coin(0, 1);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 4 + trial % 30;
    std::vector<FeatureVector> xs(n);
    std::vector<int> ys(n);
    std::vector<double> col(n);
    for (std::size_t i = 0; i < n; ++i) {
      xs[i].fill(0.5); // only feature 0 varies
      xs[i][0] = col[i] = grid(rng) / 10.0;
      ys[i] = coin(rng);
    }
    ys[0] = 0;
    ys[1] = 1;

    TrainConfig c;
    c.n_trees = 1;
    c.max_depth = 1;
    c.min_leaf = 1 + trial % 3;
    c.bootstrap = false;
    c.feature_subsample = 8;
    const auto model = train_on_features(xs, ys, c);
    const auto expected = oracle::best_single_threshold(col, ys, c.min_leaf);
    const auto &root = model.trees.at(0).nodes.at(0);

    ASSERT_EQ(!root.is_leaf(), expected.found) << "trial " << trial;
    if (!expected.found)
      continue;
    EXPECT_EQ(root.feature, 0);
    EXPECT_EQ(root.threshold, expected.threshold);

    double nl = 0, pl = 0, nr = 0, pr = 0;
    for (std::size_t i = 0; i < n; ++i)
      (col[i] <= expected.threshold ? nl : nr) += 1,
          (col[i] <= expected.threshold ? pl : pr) += ys[i];
    const auto &nodes = model.trees[0].nodes;
    EXPECT_DOUBLE_EQ(nodes.at(root.left).value, pl / nl);
    EXPECT_DOUBLE_EQ(nodes.at(root.right).value, pr / nr);
  }
}

TEST(Predict, DegenerateModels) {
  EnsembleModel one;
  one.trees.push_back({{TreeNode{-1, 0, -1, -1, 0.25}}});
  EXPECT_EQ(one.predict_proba(PairRecord{"x", "y"}), 0.25);

  EnsembleModel two;
  two.trees.push_back({{TreeNode{-1, 0, -1, -1, 0.0}}});
  two.trees.push_back({{TreeNode{-1, 0, -1, -1, 1.0}}});
  EXPECT_EQ(two.predict_proba(PairRecord{"x", "y"}), 0.5);
}

TEST(Serialization, RoundTripPredictions) {
  const auto model = train(testsupport::synthetic_separable(5, 60), small_config());
  const auto text = save_model(model);
  const auto loaded = load_model(text);
  EXPECT_EQ(loaded, model);
  EXPECT_EQ(save_model(loaded), text);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 100; ++i) {
    const PairRecord p{testsupport::random_word(rng, 1, 12), testsupport::random_word(rng, 1, 12)};
    EXPECT_EQ(loaded.predict_proba(p), model.predict_proba(p));
  }
}

TEST(Serialization, RejectsMalformedModels) {
  const auto text = save_model(train(testsupport::synthetic_separable(5, 20), small_config()));
  EXPECT_THROW(load_model(text.substr(0, text.size() / 2)), fuzzymatch::ModelFormatError);
  EXPECT_THROW(load_model(""), fuzzymatch::ModelFormatError);

  auto j = nlohmann::json::parse(text);
  auto reordered = j;
  std::swap(reordered["feature_schema"][0], reordered["feature_schema"][1]);
  EXPECT_THROW(load_model(reordered.dump()), fuzzymatch::ModelFormatError);

  auto version = j;
  version["format_version"] = 99;
  EXPECT_THROW(load_model(version.dump()), fuzzymatch::ModelFormatError);

  auto bad_leaf = j;
  bad_leaf["trees"][0] = nlohmann::json::array({{{"leaf", 1.5}}});
  EXPECT_THROW(load_model(bad_leaf.dump()), fuzzymatch::ModelFormatError);

  auto cycle = j;
  cycle["trees"][0] = nlohmann::json::array(
      {{{"feature", 0}, {"threshold", 0.5}, {"left", 0}, {"right", 0}}});
  EXPECT_THROW(load_model(cycle.dump()), fuzzymatch::ModelFormatError);
}

TEST(EnsembleScorer, IdAndDeterminism) {
  const auto model = train(testsupport::synthetic_separable(5, 20), small_config(42));
  EnsembleScorer s(model);
  EXPECT_EQ(s.scorer_id(), "ensemble:42");
  EXPECT_TRUE(s.deterministic());
}
