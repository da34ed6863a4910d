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

#ifndef AGGREX_BLACKBOX_H_
#define AGGREX_BLACKBOX_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "aggrex/data.h"
#include "aggrex/matrix.h"
#include "aggrex/parallel.h"
#include "aggrex/tree.h"

namespace aggrex {

inline constexpr int kDefaultForestSize = 50;

// The classifier under explanation. Immutable; Predict is pure and safe to
// call concurrently.
class BlackBoxModel {
 public:
  enum class Kind { kBaggedForest, kTableOracle };

  static BlackBoxModel Forest(FeatureSchema schema,
                              std::vector<DecisionTree> trees,
                              std::vector<int> label_set);
  // Exact lookup over stored points; unseen points take the label of the
  // nearest stored point under MixedDistance (lowest index on ties).
  static BlackBoxModel TableOracle(FeatureSchema schema, Matrix points,
                                   std::vector<int> labels);

  // Throws Error when x does not match the schema width.
  int Predict(std::span<const double> x) const;
  // OpenMP over rows; the serial policy is the reference.
  std::vector<int> PredictAll(MatrixView points,
                              ExecPolicy policy = ExecPolicy::kParallel) const;

  Kind kind() const { return kind_; }
  const FeatureSchema& schema() const { return schema_; }
  const std::vector<int>& label_set() const { return label_set_; }
  const std::vector<DecisionTree>& trees() const { return trees_; }
  const Matrix& table_points() const { return table_points_; }
  const std::vector<int>& table_labels() const { return table_labels_; }

  // Versioned line format:
  //   aggrex-model v1 <kind> <n_trees>
  //   features <m> <kind string>
  //   labels <l1> <l2> ...
  //   tree <t> <node_count>            (forest, per tree)
  //   node <id> split <feature> <threshold> | node <id> leaf <label>
  //   points <n> / point <label> <v1> ... <vm>   (table oracle)
  std::string Serialize() const;
  static BlackBoxModel Parse(const std::string& text);
  void Save(const std::filesystem::path& path) const;
  static BlackBoxModel Load(const std::filesystem::path& path);

 private:
  BlackBoxModel() = default;

  Kind kind_ = Kind::kBaggedForest;
  FeatureSchema schema_;
  std::vector<int> label_set_;
  std::vector<DecisionTree> trees_;
  Matrix table_points_;
  std::vector<int> table_labels_;
};

// Bagged forest: tree t is fit on a bootstrap resample (n draws with
// replacement) seeded from DeriveSeed(seed, t); prediction is the majority
// vote with ties to the smaller label. All features are considered at each
// split. A single-class dataset yields a constant model.
BlackBoxModel TrainBaggedForest(const Dataset& dataset,
                                int n_trees = kDefaultForestSize,
                                std::uint64_t seed = 1,
                                const TreeParams& params = {12, 2});

// Table oracle from (point, label) pairs. Repeated points must agree on the
// label; an exact repeat is stored once.
BlackBoxModel MakeTableOracle(
    const FeatureSchema& schema,
    const std::vector<std::pair<std::vector<double>, int>>& pairs);

std::string KindName(BlackBoxModel::Kind kind);

}  // namespace aggrex

#endif  // AGGREX_BLACKBOX_H_
