// Copyright 2026 The Aggrex Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "aggrex/tree.h"

#include <sstream>
#include <string>
#include <vector>

#include "aggrex/error.h"
#include "aggrex/rng.h"
#include "gtest/gtest.h"

namespace aggrex {
namespace {

const std::vector<int> kAll2 = {0, 1};

TEST(FitTreeTest, PureLabelsGiveOneLeaf) {
  const Matrix x({0, 1, 1, 0, 1, 1}, 3, 2);
  const std::vector<int> y = {4, 4, 4};
  const DecisionTree t = FitTree(x, y, kAll2, {});
  EXPECT_EQ(t.leaf_count(), 1);
  EXPECT_EQ(t.Predict(std::vector<double>{9, 9}), 4);
}

TEST(FitTreeTest, XorNeedsFourLeaves) {
  const Matrix x({0, 0, 0, 1, 1, 0, 1, 1}, 4, 2);
  const std::vector<int> y = {0, 1, 1, 0};
  const DecisionTree t = FitTree(x, y, kAll2, TreeParams{2, 1});
  EXPECT_EQ(t.leaf_count(), 4);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(t.Predict(x.Row(i)), y[i]);
  EXPECT_EQ(t.depth(), 2);
}

TEST(FitTreeTest, MinLeafEqualToNGivesMajorityLeaf) {
  const Matrix x({0, 1, 2, 3, 4}, 5, 1);
  const std::vector<int> y = {2, 1, 1, 2, 2};
  const std::vector<int> features = {0};
  const DecisionTree t = FitTree(x, y, features, TreeParams{12, 5});
  EXPECT_EQ(t.leaf_count(), 1);
  EXPECT_EQ(t.Predict(std::vector<double>{0}), 2);
}

TEST(FitTreeTest, RestrictedToGivenFeatures) {
  Rng rng(4);
  Matrix x(200, 4);
  std::vector<int> y(200);
  for (std::size_t i = 0; i < 200; ++i) {
    for (std::size_t f = 0; f < 4; ++f) x(i, f) = rng.Uniform();
    y[i] = (x(i, 0) > 0.5) + 2 * (x(i, 3) > 0.3);
  }
  const std::vector<int> features = {1, 3};
  const DecisionTree t = FitTree(x, y, features, TreeParams{12, 1});
  for (int f : t.FeaturesUsed()) EXPECT_TRUE(f == 1 || f == 3) << f;
}

TEST(FitTreeTest, UnprunedTreeFitsTrainingSet) {
  Rng rng(8);
  Matrix x(150, 3);
  std::vector<int> y(150);
  for (std::size_t i = 0; i < 150; ++i) {
    for (std::size_t f = 0; f < 3; ++f) x(i, f) = rng.Normal();
    y[i] = static_cast<int>(rng.Below(3));
  }
  const std::vector<int> features = {0, 1, 2};
  const DecisionTree t = FitTree(x, y, features, TreeParams{64, 1});
  int hits = 0;
  for (std::size_t i = 0; i < 150; ++i) hits += t.Predict(x.Row(i)) == y[i];
  EXPECT_EQ(hits, 150);
  EXPECT_GE(t.leaf_count(), 3);
}

TEST(FitTreeTest, SplitTieTakesLowerFeature) {
  // Features 0 and 1 are identical copies of the label.
  const Matrix x({0, 0, 0, 0, 1, 1, 1, 1}, 4, 2);
  const std::vector<int> y = {0, 0, 1, 1};
  const DecisionTree t = FitTree(x, y, kAll2, {});
  EXPECT_EQ(t.FeaturesUsed(), std::vector<int>{0});
  EXPECT_EQ(t.nodes()[0].threshold, 0.5);
}

TEST(DecisionTreeTest, RecordsRoundTrip) {
  Rng rng(2);
  Matrix x(100, 3);
  std::vector<int> y(100);
  for (std::size_t i = 0; i < 100; ++i) {
    for (std::size_t f = 0; f < 3; ++f) x(i, f) = rng.Normal();
    y[i] = x(i, 0) + x(i, 2) > 0 ? 1 : 0;
  }
  const std::vector<int> features = {0, 1, 2};
  const DecisionTree t = FitTree(x, y, features, TreeParams{6, 2});
  const DecisionTree back = DecisionTree::FromRecords(t.Records());
  EXPECT_EQ(back, t);
  for (std::size_t i = 0; i < 100; ++i) {
    EXPECT_EQ(back.Predict(x.Row(i)), t.Predict(x.Row(i)));
  }
  std::ostringstream out;
  t.WriteRecords(out);
  EXPECT_EQ(out.str().substr(0, 12), "node 0 split");
}

TEST(DecisionTreeTest, MalformedRecordsAreRejected) {
  EXPECT_THROW(DecisionTree::FromRecords({"node 0 split 0 0.5"}), Error);
  EXPECT_THROW(DecisionTree::FromRecords({"node 1 leaf 0"}), Error);
  EXPECT_THROW(DecisionTree::FromRecords({"node 0 bogus"}), Error);
  EXPECT_EQ(DecisionTree::FromRecords({"node 0 leaf 3"}).leaf_count(), 1);
}

TEST(DecisionTreeTest, TruncatedUsesMajorityLabels) {
  const Matrix x({0, 0, 0, 1, 1, 0, 1, 1, 1, 1}, 5, 2);
  const std::vector<int> y = {0, 1, 1, 0, 0};
  const DecisionTree t = FitTree(x, y, kAll2, TreeParams{4, 1});
  const DecisionTree stump = t.Truncated(0);
  EXPECT_EQ(stump.leaf_count(), 1);
  EXPECT_EQ(stump.Predict(x.Row(0)), 0);
  EXPECT_LE(t.Truncated(1).leaf_count(), 2);
  EXPECT_EQ(t.Truncated(10), t);
}

TEST(DecisionTreeTest, RulesMentionFeatureNames) {
  const Matrix x({0, 1, 0, 1}, 4, 1);
  const std::vector<int> y = {0, 1, 0, 1};
  const std::vector<int> features = {0};
  const DecisionTree t = FitTree(x, y, features, {});
  const std::string rules = t.ToRules({"smoker"});
  EXPECT_NE(rules.find("smoker"), std::string::npos);
}

TEST(MajorityVoteTest, TiesGoToSmallerLabel) {
  EXPECT_EQ(MajorityVote(std::vector<int>{2, 2, 3}), 2);
  EXPECT_EQ(MajorityVote(std::vector<int>{3, 1, 1, 3}), 1);
  EXPECT_THROW(MajorityVote(std::vector<int>{}), Error);
}

}  // namespace
}  // namespace aggrex
