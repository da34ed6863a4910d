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

#ifndef AGGREX_TREE_H_
#define AGGREX_TREE_H_

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "aggrex/matrix.h"

namespace aggrex {

// A node of a binary classification tree. Internal nodes route x to `left`
// when x[feature] <= threshold. Every node stores the majority label of the
// training rows that reached it, so a tree can be truncated at any depth.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  int label = 0;

  bool is_leaf() const { return feature < 0; }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

struct TreeParams {
  int max_depth = 12;
  std::size_t min_leaf = 2;
};

// Axis-aligned decision tree stored in pre-order (root at index 0, left
// subtree before right subtree).
class DecisionTree {
 public:
  DecisionTree() : nodes_{TreeNode{}} {}
  // Throws Error when the node list is not a valid pre-order tree.
  explicit DecisionTree(std::vector<TreeNode> nodes);

  static DecisionTree Leaf(int label);

  int Predict(std::span<const double> x) const;
  int leaf_count() const;
  int depth() const;
  // Sorted distinct features tested by internal nodes.
  std::vector<int> FeaturesUsed() const;
  // The tree grown with max_depth = `max_depth`: nodes below are dropped and
  // their ancestors become leaves with their stored majority label.
  DecisionTree Truncated(int max_depth) const;

  const std::vector<TreeNode>& nodes() const { return nodes_; }

  // Node records `node <id> split <feature> <threshold>` and
  // `node <id> leaf <label>`, one per line, pre-order.
  void WriteRecords(std::ostream& out) const;
  std::vector<std::string> Records() const;
  // Parses records written by WriteRecords. Node ids must be 0..n-1 in order.
  static DecisionTree FromRecords(const std::vector<std::string>& lines);

  // Nested if/else rule text.
  std::string ToRules(const std::vector<std::string>& feature_names) const;

  // Same routing and leaf labels. Internal majority labels are not part of
  // the record format and are not compared.
  friend bool operator==(const DecisionTree& a, const DecisionTree& b);

 private:
  std::vector<TreeNode> nodes_;
};

// Greedy CART induction with Gini impurity restricted to `features`. Every
// impure node within the depth cap takes its lowest-impurity split among
// those leaving >= min_leaf rows on both sides. Ties go to the lower feature
// index, then the lower threshold; majority ties go to the smaller label.
DecisionTree FitTree(MatrixView points, std::span<const int> labels,
                     std::span<const int> features, const TreeParams& params);

// Majority label; ties resolve to the smaller label. `votes` must be
// non-empty.
int MajorityVote(std::span<const int> votes);

}  // namespace aggrex

#endif  // AGGREX_TREE_H_
