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

#include <algorithm>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>
#include <utility>

#include "aggrex/data.h"
#include "aggrex/error.h"

namespace aggrex {
namespace {

class TreeBuilder {
 public:
  TreeBuilder(MatrixView points, std::span<const int> labels,
              std::span<const int> features, const TreeParams& params)
      : points_(points), params_(params) {
    classes_.assign(labels.begin(), labels.end());
    std::sort(classes_.begin(), classes_.end());
    classes_.erase(std::unique(classes_.begin(), classes_.end()),
                   classes_.end());
    codes_.reserve(labels.size());
    for (int label : labels) {
      codes_.push_back(static_cast<int>(
          std::lower_bound(classes_.begin(), classes_.end(), label) -
          classes_.begin()));
    }
    features_.assign(features.begin(), features.end());
    std::sort(features_.begin(), features_.end());
    features_.erase(std::unique(features_.begin(), features_.end()),
                    features_.end());
  }

  std::vector<TreeNode> Build() {
    std::vector<int> rows(codes_.size());
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = static_cast<int>(i);
    Grow(rows, 0);
    return std::move(nodes_);
  }

 private:
  struct Split {
    int feature = -1;
    double threshold = 0.0;
  };

  int Grow(std::vector<int>& rows, int depth) {
    const std::size_t num_classes = classes_.size();
    std::vector<std::size_t> counts(num_classes, 0);
    for (int r : rows) ++counts[codes_[r]];
    std::size_t best_class = 0;
    for (std::size_t c = 1; c < num_classes; ++c) {
      if (counts[c] > counts[best_class]) best_class = c;
    }
    const int index = static_cast<int>(nodes_.size());
    TreeNode node;
    node.label = classes_[best_class];
    nodes_.push_back(node);

    const std::size_t n = rows.size();
    const bool pure = counts[best_class] == n;
    if (pure || depth >= params_.max_depth ||
        n < 2 * std::max<std::size_t>(params_.min_leaf, 1)) {
      return index;
    }
    const Split split = FindSplit(rows, counts);
    if (split.feature < 0) return index;

    std::vector<int> left_rows;
    std::vector<int> right_rows;
    for (int r : rows) {
      if (points_(r, split.feature) <= split.threshold) {
        left_rows.push_back(r);
      } else {
        right_rows.push_back(r);
      }
    }
    rows.clear();
    rows.shrink_to_fit();
    const int left = Grow(left_rows, depth + 1);
    const int right = Grow(right_rows, depth + 1);
    TreeNode& parent = nodes_[index];
    parent.feature = split.feature;
    parent.threshold = split.threshold;
    parent.left = left;
    parent.right = right;
    return index;
  }

  // Maximizes sum_c L_c^2 / n_L + sum_c R_c^2 / n_R, which is equivalent to
  // minimizing the size-weighted Gini impurity of the two children.
  Split FindSplit(const std::vector<int>& rows,
                  const std::vector<std::size_t>& counts) {
    const std::size_t n = rows.size();
    const std::size_t min_leaf = std::max<std::size_t>(params_.min_leaf, 1);
    double parent_sumsq = 0.0;
    for (auto c : counts) parent_sumsq += static_cast<double>(c) * c;
    const double parent_score = parent_sumsq / static_cast<double>(n);
    const double tolerance = 1e-12 * std::max(1.0, parent_score);

    // An impure node takes its best valid split even when no split lowers
    // the impurity (XOR-like cells need two levels to separate).
    Split best;
    double best_score = -1.0;
    std::vector<std::size_t> left(counts.size());
    std::vector<std::size_t> right(counts.size());
    for (int feature : features_) {
      scratch_.clear();
      for (int r : rows) scratch_.emplace_back(points_(r, feature), codes_[r]);
      std::sort(scratch_.begin(), scratch_.end());
      if (scratch_.front().first == scratch_.back().first) continue;
      std::fill(left.begin(), left.end(), 0);
      right = counts;
      double left_sumsq = 0.0;
      double right_sumsq = parent_sumsq;
      for (std::size_t k = 0; k + 1 < n; ++k) {
        const int c = scratch_[k].second;
        left_sumsq += 2.0 * static_cast<double>(left[c]) + 1.0;
        ++left[c];
        right_sumsq -= 2.0 * static_cast<double>(right[c]) - 1.0;
        --right[c];
        const double v = scratch_[k].first;
        const double next = scratch_[k + 1].first;
        if (v == next) continue;
        const std::size_t n_left = k + 1;
        const std::size_t n_right = n - n_left;
        if (n_left < min_leaf || n_right < min_leaf) continue;
        const double score = left_sumsq / static_cast<double>(n_left) +
                             right_sumsq / static_cast<double>(n_right);
        if (score > best_score) {
          best_score = score + tolerance;
          best.feature = feature;
          double threshold = v + (next - v) / 2.0;
          if (!(threshold < next)) threshold = v;
          best.threshold = threshold;
        }
      }
    }
    return best;
  }

  MatrixView points_;
  TreeParams params_;
  std::vector<int> classes_;
  std::vector<int> codes_;
  std::vector<int> features_;
  std::vector<TreeNode> nodes_;
  std::vector<std::pair<double, int>> scratch_;
};

int ParseIntToken(const std::string& token, const std::string& line) {
  std::size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(token, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != token.size() || token.empty()) {
    throw ParseError("bad integer '" + token + "' in '" + line + "'", 0);
  }
  return value;
}

double ParseDoubleToken(const std::string& token, const std::string& line) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(token, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != token.size() || token.empty()) {
    throw ParseError("bad number '" + token + "' in '" + line + "'", 0);
  }
  return value;
}

}  // namespace

DecisionTree::DecisionTree(std::vector<TreeNode> nodes)
    : nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw Error("tree has no nodes");
  // Pre-order check: the left child immediately follows its parent and the
  // right child follows the whole left subtree.
  std::function<int(int)> check = [&](int index) -> int {
    if (index < 0 || static_cast<std::size_t>(index) >= nodes_.size()) {
      throw Error("tree node index out of range");
    }
    const TreeNode& node = nodes_[index];
    if (node.is_leaf()) return index + 1;
    if (node.left != index + 1) throw Error("tree is not in pre-order");
    const int after_left = check(node.left);
    if (node.right != after_left) throw Error("tree is not in pre-order");
    return check(node.right);
  };
  if (check(0) != static_cast<int>(nodes_.size())) {
    throw Error("tree has unreachable nodes");
  }
}

DecisionTree DecisionTree::Leaf(int label) {
  TreeNode node;
  node.label = label;
  return DecisionTree(std::vector<TreeNode>{node});
}

int DecisionTree::Predict(std::span<const double> x) const {
  int index = 0;
  while (!nodes_[index].is_leaf()) {
    const TreeNode& node = nodes_[index];
    index = x[node.feature] <= node.threshold ? node.left : node.right;
  }
  return nodes_[index].label;
}

int DecisionTree::leaf_count() const {
  return static_cast<int>(
      std::count_if(nodes_.begin(), nodes_.end(),
                    [](const TreeNode& n) { return n.is_leaf(); }));
}

int DecisionTree::depth() const {
  std::function<int(int)> walk = [&](int index) -> int {
    const TreeNode& node = nodes_[index];
    if (node.is_leaf()) return 0;
    return 1 + std::max(walk(node.left), walk(node.right));
  };
  return walk(0);
}

std::vector<int> DecisionTree::FeaturesUsed() const {
  std::vector<int> out;
  for (const auto& node : nodes_) {
    if (!node.is_leaf()) out.push_back(node.feature);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

DecisionTree DecisionTree::Truncated(int max_depth) const {
  std::vector<TreeNode> out;
  std::function<int(int, int)> copy = [&](int index, int depth) -> int {
    const int at = static_cast<int>(out.size());
    TreeNode node = nodes_[index];
    if (node.is_leaf() || depth >= max_depth) {
      node.feature = -1;
      node.threshold = 0.0;
      node.left = node.right = -1;
      out.push_back(node);
      return at;
    }
    out.push_back(node);
    const int left = copy(node.left, depth + 1);
    const int right = copy(node.right, depth + 1);
    out[at].left = left;
    out[at].right = right;
    return at;
  };
  copy(0, 0);
  return DecisionTree(std::move(out));
}

void DecisionTree::WriteRecords(std::ostream& out) const {
  for (const auto& line : Records()) out << line << '\n';
}

std::vector<std::string> DecisionTree::Records() const {
  std::vector<std::string> lines;
  lines.reserve(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const TreeNode& node = nodes_[i];
    std::string line = "node " + std::to_string(i);
    if (node.is_leaf()) {
      line += " leaf " + std::to_string(node.label);
    } else {
      line += " split " + std::to_string(node.feature) + " " +
              FormatDouble(node.threshold);
    }
    lines.push_back(std::move(line));
  }
  return lines;
}

DecisionTree DecisionTree::FromRecords(const std::vector<std::string>& lines) {
  if (lines.empty()) throw ParseError("tree has no node records", 0);
  std::vector<TreeNode> nodes(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::istringstream in(lines[i]);
    std::string tag, id, kind, a, b, extra;
    in >> tag >> id >> kind >> a;
    if (kind == "split") in >> b;
    if (tag != "node" || (in >> extra)) {
      throw ParseError("bad node record '" + lines[i] + "'", 0);
    }
    if (ParseIntToken(id, lines[i]) != static_cast<int>(i)) {
      throw ParseError("node ids must be consecutive: '" + lines[i] + "'", 0);
    }
    if (kind == "leaf") {
      nodes[i].label = ParseIntToken(a, lines[i]);
    } else if (kind == "split") {
      nodes[i].feature = ParseIntToken(a, lines[i]);
      if (nodes[i].feature < 0) {
        throw ParseError("negative split feature '" + lines[i] + "'", 0);
      }
      nodes[i].threshold = ParseDoubleToken(b, lines[i]);
    } else {
      throw ParseError("bad node record '" + lines[i] + "'", 0);
    }
  }
  // Rebuild child links from pre-order.
  std::size_t next = 0;
  std::function<int()> link = [&]() -> int {
    if (next >= nodes.size()) throw ParseError("truncated tree records", 0);
    const int index = static_cast<int>(next++);
    if (nodes[index].is_leaf()) return index;
    nodes[index].left = link();
    nodes[index].right = link();
    return index;
  };
  link();
  if (next != nodes.size()) throw ParseError("extra tree records", 0);
  // Internal nodes are not labelled in the record format; give them the label
  // of their left-most leaf so Truncated() stays well-defined.
  for (std::size_t i = nodes.size(); i-- > 0;) {
    if (!nodes[i].is_leaf()) nodes[i].label = nodes[nodes[i].left].label;
  }
  return DecisionTree(std::move(nodes));
}

std::string DecisionTree::ToRules(
    const std::vector<std::string>& feature_names) const {
  std::ostringstream out;
  std::function<void(int, int)> emit = [&](int index, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    const TreeNode& node = nodes_[index];
    if (node.is_leaf()) {
      out << pad << "predict " << node.label << '\n';
      return;
    }
    const std::string name =
        static_cast<std::size_t>(node.feature) < feature_names.size()
            ? feature_names[node.feature]
            : "x" + std::to_string(node.feature);
    out << pad << "if " << name << " <= " << FormatDouble(node.threshold)
        << ":\n";
    emit(node.left, indent + 1);
    out << pad << "else:\n";
    emit(node.right, indent + 1);
  };
  emit(0, 0);
  return out.str();
}

DecisionTree FitTree(MatrixView points, std::span<const int> labels,
                     std::span<const int> features, const TreeParams& params) {
  if (points.rows() == 0) throw Error("cannot fit a tree on zero rows");
  if (labels.size() != points.rows()) {
    throw Error("label count does not match row count");
  }
  for (int f : features) {
    if (f < 0 || static_cast<std::size_t>(f) >= points.cols()) {
      throw Error("tree feature " + std::to_string(f) + " out of range");
    }
  }
  return DecisionTree(TreeBuilder(points, labels, features, params).Build());
}

bool operator==(const DecisionTree& a, const DecisionTree& b) {
  if (a.nodes_.size() != b.nodes_.size()) return false;
  for (std::size_t i = 0; i < a.nodes_.size(); ++i) {
    const TreeNode& x = a.nodes_[i];
    const TreeNode& y = b.nodes_[i];
    if (x.is_leaf() != y.is_leaf()) return false;
    if (x.is_leaf() ? x.label != y.label
                    : (x.feature != y.feature || x.threshold != y.threshold ||
                       x.left != y.left || x.right != y.right)) {
      return false;
    }
  }
  return true;
}

int MajorityVote(std::span<const int> votes) {
  if (votes.empty()) throw Error("majority vote over no votes");
  std::map<int, std::size_t> tally;
  for (int v : votes) ++tally[v];
  int best = tally.begin()->first;
  std::size_t best_count = 0;
  for (const auto& [label, count] : tally) {
    if (count > best_count) {
      best = label;
      best_count = count;
    }
  }
  return best;
}

}  // namespace aggrex
