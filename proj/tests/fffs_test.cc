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

#include "aggrex/fffs.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "aggrex/error.h"
#include "aggrex/rng.h"
#include "gtest/gtest.h"

namespace aggrex {
namespace {

// Builds a BinAssignment straight from a bin-index table (rows = samples).
BinAssignment FromTable(const std::vector<std::vector<int>>& table,
                        int max_bins) {
  BinAssignment b;
  b.samples = table.size();
  b.features = table.empty() ? 0 : table.front().size();
  b.max_bins = max_bins;
  b.bin_count.assign(b.features, max_bins);
  b.edges.assign(b.features, {});
  b.assignment.resize(b.samples * b.features);
  for (std::size_t s = 0; s < b.samples; ++s) {
    for (std::size_t f = 0; f < b.features; ++f) {
      b.assignment[f * b.samples + s] = static_cast<std::uint8_t>(table[s][f]);
    }
  }
  return b;
}

double Entropy(const std::map<int, int>& counts, int total) {
  double h = 0.0;
  for (const auto& [key, c] : counts) {
    const double p = static_cast<double>(c) / total;
    h -= p * std::log(p);
  }
  return h;
}

// I(X;Y|leaves) through per-leaf entropies of the contingency table,
// H(X) + H(Y) - H(X,Y), weighted by |leaf| / N.
double EntropyRouteMi(int feature, const std::vector<int>& y,
                      const PartitionLeaves& leaves, const BinAssignment& b) {
  double total = 0.0;
  for (const auto& leaf : leaves) {
    std::map<int, int> hx, hy, hxy;
    for (int s : leaf) {
      const int x = b.bin(s, feature);
      ++hx[x];
      ++hy[y[s]];
      ++hxy[x * 1000 + y[s]];
    }
    const int n = static_cast<int>(leaf.size());
    total += static_cast<double>(n) / b.samples *
             (Entropy(hx, n) + Entropy(hy, n) - Entropy(hxy, n));
  }
  return total;
}

PartitionLeaves RandomLeaves(Rng& rng, std::size_t n) {
  const std::size_t groups = 1 + rng.Below(4);
  PartitionLeaves leaves(groups);
  for (std::size_t s = 0; s < n; ++s) {
    // Some samples are left out, as after leaf dropping.
    if (rng.Uniform() < 0.1) continue;
    leaves[rng.Below(groups)].push_back(static_cast<int>(s));
  }
  std::erase_if(leaves, [](const auto& l) { return l.empty(); });
  return leaves;
}

TEST(BuildHistogramsTest, BinaryColumnKeepsValues) {
  const FeatureSchema s = FeatureSchema::Make(0, 1);
  const Matrix x({1, 0, 0, 1, 1}, 5, 1);
  const BinAssignment b = BuildHistograms(x, s);
  EXPECT_EQ(b.bin_count[0], 2);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(b.bin(i, 0), int(x(i, 0)));
}

TEST(BuildHistogramsTest, EqualWidthEdges) {
  const FeatureSchema s = FeatureSchema::Make(1, 0);
  const Matrix x({0, 0.5, 1}, 3, 1);
  const BinAssignment b = BuildHistograms(x, s, 3);
  EXPECT_EQ(b.bin(0, 0), 0);
  EXPECT_EQ(b.bin(1, 0), 1);
  EXPECT_EQ(b.bin(2, 0), 2);
  ASSERT_EQ(b.edges[0].size(), 4u);
  EXPECT_DOUBLE_EQ(b.edges[0][1], 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(b.edges[0][2], 2.0 / 3.0);
  for (std::size_t k = 1; k < b.edges[0].size(); ++k) {
    EXPECT_LT(b.edges[0][k - 1], b.edges[0][k]);
  }
}

TEST(BuildHistogramsTest, ConstantColumnUsesOneBin) {
  const FeatureSchema s = FeatureSchema::Make(1, 0);
  const Matrix x({4, 4, 4, 4}, 4, 1);
  const BinAssignment b = BuildHistograms(x, s, 3);
  EXPECT_EQ(b.bin_count[0], 1);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(b.bin(i, 0), 0);
}

TEST(BuildHistogramsTest, RejectsBadBinCount) {
  const FeatureSchema s = FeatureSchema::Make(1, 0);
  const Matrix x({0, 1}, 2, 1);
  EXPECT_THROW(BuildHistograms(x, s, 1), Error);
  EXPECT_THROW(BuildHistograms(Matrix(0, 1), s, 3), Error);
}

TEST(BuildHistogramsTest, EverySampleHasOneBinPerFeature) {
  Rng rng(5);
  const FeatureSchema s = FeatureSchema::Make(3, 2);
  Matrix x(300, 5);
  for (std::size_t i = 0; i < 300; ++i) {
    for (std::size_t f = 0; f < 3; ++f) x(i, f) = rng.Normal();
    for (std::size_t f = 3; f < 5; ++f) x(i, f) = double(rng.Below(2));
  }
  const BinAssignment b = BuildHistograms(x, s, 3);
  for (std::size_t i = 0; i < 300; ++i) {
    for (std::size_t f = 0; f < 5; ++f) {
      EXPECT_GE(b.bin(i, f), 0);
      EXPECT_LT(b.bin(i, f), b.bin_count[f]);
    }
  }
}

TEST(CondMutualInfoTest, MatchesEntropyRouteOracle) {
  Rng rng(20240501);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng.Below(49);
    const int bins = 2 + static_cast<int>(rng.Below(2));
    const int classes = 1 + static_cast<int>(rng.Below(4));
    std::vector<std::vector<int>> table(n, std::vector<int>(3));
    std::vector<int> y(n);
    for (std::size_t s = 0; s < n; ++s) {
      for (auto& v : table[s]) v = static_cast<int>(rng.Below(bins));
      y[s] = static_cast<int>(rng.Below(classes));
    }
    const BinAssignment b = FromTable(table, bins);
    const EncodedLabels encoded = EncodeLabels(y);
    const PartitionLeaves leaves = RandomLeaves(rng, n);
    for (int f = 0; f < 3; ++f) {
      const double got = CondMutualInfo(f, encoded, leaves, b);
      EXPECT_NEAR(got, EntropyRouteMi(f, y, leaves, b), 1e-12)
          << "trial " << trial;
      EXPECT_GE(got, -1e-12);
    }
  }
}

TEST(CondMutualInfoTest, PerfectCopyIsLogTwo) {
  std::vector<std::vector<int>> table;
  std::vector<int> y;
  for (int s = 0; s < 40; ++s) {
    table.push_back({s % 2});
    y.push_back(s % 2);
  }
  const BinAssignment b = FromTable(table, 2);
  EXPECT_NEAR(CondMutualInfo(0, EncodeLabels(y), RootLeaves(40), b),
              std::log(2.0), 1e-12);
}

TEST(CondMutualInfoTest, IndependentCasesAreZero) {
  // Joint uniform over the 2 x 2 cells.
  const BinAssignment uniform = FromTable({{0}, {0}, {1}, {1}}, 2);
  const std::vector<int> y = {0, 1, 0, 1};
  EXPECT_NEAR(CondMutualInfo(0, EncodeLabels(y), RootLeaves(4), uniform), 0.0,
              1e-15);
  // Feature constant within each leaf.
  const BinAssignment split = FromTable({{0}, {0}, {1}, {1}}, 2);
  const PartitionLeaves leaves = {{0, 1}, {2, 3}};
  EXPECT_EQ(CondMutualInfo(0, EncodeLabels(std::vector<int>{0, 1, 1, 0}),
                           leaves, split),
            0.0);
}

TEST(CondMutualInfoTest, PermutationInvariance) {
  Rng rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 10 + rng.Below(40);
    std::vector<std::vector<int>> table(n, std::vector<int>(1));
    std::vector<int> y(n);
    for (std::size_t s = 0; s < n; ++s) {
      table[s][0] = static_cast<int>(rng.Below(3));
      y[s] = static_cast<int>(rng.Below(3));
    }
    const PartitionLeaves leaves = RandomLeaves(rng, n);
    const double base =
        CondMutualInfo(0, EncodeLabels(y), leaves, FromTable(table, 3));
    const int bin_perm[3] = {2, 0, 1};
    const int label_perm[3] = {7, 3, 5};
    auto relabeled_table = table;
    auto relabeled_y = y;
    for (std::size_t s = 0; s < n; ++s) {
      relabeled_table[s][0] = bin_perm[table[s][0]];
      relabeled_y[s] = label_perm[y[s]];
    }
    EXPECT_NEAR(CondMutualInfo(0, EncodeLabels(relabeled_y), leaves,
                               FromTable(relabeled_table, 3)),
                base, 1e-12);
  }
}

TEST(CondMutualInfoTest, FeatureOutOfRange) {
  const BinAssignment b = FromTable({{0}, {1}}, 2);
  const EncodedLabels y = EncodeLabels(std::vector<int>{0, 1});
  EXPECT_THROW(CondMutualInfo(1, y, RootLeaves(2), b), Error);
  EXPECT_THROW(CondMutualInfo(-1, y, RootLeaves(2), b), Error);
}

TEST(BinPartitionTest, SplitsByBin) {
  // Samples 0..3 in bin 0, 4..9 in bin 1.
  std::vector<std::vector<int>> table;
  for (int s = 0; s < 10; ++s) table.push_back({s < 4 ? 0 : 1});
  const BinAssignment b = FromTable(table, 2);
  const PartitionLeaves out = BinPartition(b, RootLeaves(10), 0);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0], (std::vector<int>{0, 1, 2, 3}));
  EXPECT_EQ(out[1], (std::vector<int>{4, 5, 6, 7, 8, 9}));
}

TEST(BinPartitionTest, SingleBinAndSmallCells) {
  const BinAssignment same = FromTable({{1}, {1}, {1}}, 2);
  EXPECT_EQ(BinPartition(same, RootLeaves(3), 0), RootLeaves(3));
  const BinAssignment split = FromTable({{0}, {1}, {0}}, 2);
  const PartitionLeaves out = BinPartition(split, RootLeaves(3), 0);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0], (std::vector<int>{0, 2}));
}

TEST(BinPartitionTest, LeavesConstantInSplitFeature) {
  Rng rng(3);
  std::vector<std::vector<int>> table(60, std::vector<int>(2));
  for (auto& row : table) {
    for (auto& v : row) v = static_cast<int>(rng.Below(3));
  }
  const BinAssignment b = FromTable(table, 3);
  const PartitionLeaves leaves = BinPartition(b, RootLeaves(60), 1);
  std::set<int> seen;
  for (const auto& leaf : leaves) {
    EXPECT_GE(leaf.size(), 2u);
    for (int s : leaf) {
      EXPECT_EQ(b.bin(s, 1), b.bin(leaf.front(), 1));
      EXPECT_TRUE(seen.insert(s).second);
    }
  }
  std::vector<int> y(60);
  for (auto& v : y) v = static_cast<int>(rng.Below(2));
  EXPECT_EQ(CondMutualInfo(1, EncodeLabels(y), leaves, b), 0.0);
}

TEST(SelectFeatureTest, ConstantFeaturesStop) {
  const BinAssignment b = FromTable({{0, 1}, {0, 1}, {0, 1}, {0, 1}}, 2);
  const EncodedLabels y = EncodeLabels(std::vector<int>{0, 1, 0, 1});
  const SelectionState out = SelectFeature(InitialSelectionState(b), b, y);
  EXPECT_TRUE(out.selected.empty());
  EXPECT_TRUE(out.unselected.empty());
  EXPECT_EQ(out.trace.size(), 1u);
}

TEST(SelectFeatureTest, PerfectPredictorFirst) {
  // 16 points: feature 2 equals the label, features 0, 1, 3 are balanced
  // and independent of it.
  std::vector<std::vector<int>> table;
  std::vector<int> y;
  for (int s = 0; s < 16; ++s) {
    table.push_back({s & 1, (s >> 1) & 1, (s >> 3) & 1, (s >> 2) & 1});
    y.push_back((s >> 3) & 1);
  }
  const BinAssignment b = FromTable(table, 2);
  const EncodedLabels encoded = EncodeLabels(y);
  const SelectionState out =
      SelectFeature(InitialSelectionState(b), b, encoded);
  ASSERT_EQ(out.selected, std::vector<int>{2});
  const auto& round = out.trace.front();
  for (std::size_t k = 0; k < round.candidates.size(); ++k) {
    EXPECT_NEAR(round.candidate_mi[k],
                EntropyRouteMi(round.candidates[k], y, RootLeaves(16), b),
                1e-12);
  }
  EXPECT_NEAR(round.best_mi, std::log(2.0), 1e-12);
  EXPECT_EQ(out.unselected, (std::vector<int>{0, 1, 3}));
}

TEST(SelectFeatureTest, TieGoesToLowerIndex) {
  std::vector<std::vector<int>> table;
  std::vector<int> y;
  for (int s = 0; s < 8; ++s) {
    table.push_back({s & 1, (s >> 2) & 1, (s >> 2) & 1});
    y.push_back((s >> 2) & 1);
  }
  const BinAssignment b = FromTable(table, 2);
  const SelectionState out =
      SelectFeature(InitialSelectionState(b), b, EncodeLabels(y));
  EXPECT_EQ(out.selected, std::vector<int>{1});
}

TEST(RecursionFfsTest, EmptyCandidatesAndDroppedLeaves) {
  const BinAssignment b = FromTable({{0, 0}, {1, 1}, {0, 1}, {1, 0}}, 2);
  const EncodedLabels y = EncodeLabels(std::vector<int>{0, 1, 1, 0});
  SelectionState none = InitialSelectionState(b);
  none.unselected.clear();
  EXPECT_TRUE(RecursionFfs(none, b, y).selected.empty());

  // Three samples, each feature splits them 2/1; after one pick only a
  // size-2 leaf remains, after two nothing does.
  const BinAssignment tiny = FromTable({{0, 0}, {0, 1}, {1, 1}}, 2);
  const EncodedLabels ty = EncodeLabels(std::vector<int>{0, 1, 2});
  const SelectionState out =
      RecursionFfs(InitialSelectionState(tiny), tiny, ty);
  EXPECT_LE(out.selected.size(), 2u);
  EXPECT_FALSE(out.selected.empty());
}

TEST(FffsTest, ConstantLabelSelectsNothing) {
  Rng rng(1);
  const FeatureSchema s = FeatureSchema::Make(3, 3);
  Matrix x(200, 6);
  for (std::size_t i = 0; i < 200; ++i) {
    for (std::size_t f = 0; f < 3; ++f) x(i, f) = rng.Normal();
    for (std::size_t f = 3; f < 6; ++f) x(i, f) = double(rng.Below(2));
  }
  const std::vector<int> y(200, 4);
  EXPECT_TRUE(Fffs(x, y, s).empty());
}

TEST(FffsTest, LabelCopyOfBinaryFeature) {
  Rng rng(2);
  const FeatureSchema s = FeatureSchema::Make(2, 4);
  Matrix x(500, 6);
  std::vector<int> y(500);
  for (std::size_t i = 0; i < 500; ++i) {
    for (std::size_t f = 0; f < 2; ++f) x(i, f) = rng.Normal();
    for (std::size_t f = 2; f < 6; ++f) x(i, f) = double(rng.Below(2));
    y[i] = static_cast<int>(x(i, 3));
  }
  EXPECT_EQ(Fffs(x, y, s), std::vector<int>{3});
}

TEST(FffsTest, PlantedRelevance) {
  int contained = 0;
  std::vector<std::size_t> sizes;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    SynthSpec spec;
    spec.seed = seed;
    spec.n = 2000;
    const Dataset d = SynthMulticlass(spec);
    const std::vector<int> chosen = Fffs(d.x(), d.labels(), d.schema());
    const std::set<int> unique(chosen.begin(), chosen.end());
    EXPECT_EQ(unique.size(), chosen.size());
    contained += std::includes(spec.relevant.begin(), spec.relevant.end(),
                               unique.begin(), unique.end());
    sizes.push_back(chosen.size());
  }
  std::sort(sizes.begin(), sizes.end());
  EXPECT_GE(contained, 45);
  EXPECT_LE(sizes[sizes.size() / 2], 5u);
}

TEST(FffsTest, SerialAndParallelScoresAgree) {
  SynthSpec spec;
  spec.seed = 3;
  spec.n = 1500;
  const Dataset d = SynthMulticlass(spec);
  const BinAssignment b = BuildHistograms(d.x(), d.schema());
  const EncodedLabels y = EncodeLabels(d.labels());
  std::vector<int> all(d.cols());
  std::iota(all.begin(), all.end(), 0);
  const PartitionLeaves leaves = BinPartition(b, RootLeaves(d.rows()), 11);
  EXPECT_EQ(ScoreFeaturesSerial(all, y, leaves, b),
            ScoreFeaturesParallel(all, y, leaves, b));

  FffsOptions serial;
  serial.policy = ExecPolicy::kSerial;
  EXPECT_EQ(Fffs(d.x(), d.labels(), d.schema(), serial),
            Fffs(d.x(), d.labels(), d.schema()));
}

TEST(FffsTest, CapAndTrace) {
  SynthSpec spec;
  spec.seed = 8;
  spec.n = 1000;
  const Dataset d = SynthMulticlass(spec);
  FffsOptions options;
  options.max_selected = 1;
  EXPECT_EQ(Fffs(d.x(), d.labels(), d.schema(), options).size(), 1u);

  const SelectionState state = FffsWithTrace(d.x(), d.labels(), d.schema());
  for (const auto& round : state.trace) {
    if (round.selected) {
      EXPECT_GT(round.best_mi, kDefaultMiEpsilon);
    }
  }
  const nlohmann::json j = TraceToJson(state);
  EXPECT_EQ(j["rounds"].size(), state.trace.size());
  EXPECT_EQ(j["selected"].get<std::vector<int>>(), state.selected);
}

}  // namespace
}  // namespace aggrex
