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

#include "aggrex/blackbox.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "aggrex/error.h"
#include "aggrex/io.h"
#include "aggrex/metric.h"
#include "aggrex/rng.h"

namespace aggrex {
namespace {

constexpr const char* kMagic = "aggrex-model";
constexpr const char* kVersion = "v1";

std::vector<std::string> Tokens(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string token;
  while (in >> token) out.push_back(token);
  return out;
}

long long ToInteger(const std::string& token) {
  std::size_t used = 0;
  long long value = 0;
  try {
    value = std::stoll(token, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (token.empty() || used != token.size()) {
    throw ParseError("model: bad integer '" + token + "'", 0);
  }
  return value;
}

double ToReal(const std::string& token) {
  std::size_t used = 0;
  double value = 0;
  try {
    value = std::stod(token, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (token.empty() || used != token.size()) {
    throw ParseError("model: bad number '" + token + "'", 0);
  }
  return value;
}

}  // namespace

std::string KindName(BlackBoxModel::Kind kind) {
  return kind == BlackBoxModel::Kind::kBaggedForest ? "bagged_forest"
                                                    : "table_oracle";
}

BlackBoxModel BlackBoxModel::Forest(FeatureSchema schema,
                                    std::vector<DecisionTree> trees,
                                    std::vector<int> label_set) {
  schema.Validate();
  if (trees.empty()) throw Error("forest needs at least one tree");
  std::sort(label_set.begin(), label_set.end());
  label_set.erase(std::unique(label_set.begin(), label_set.end()),
                  label_set.end());
  for (const auto& tree : trees) {
    for (const auto& node : tree.nodes()) {
      if (node.is_leaf()) {
        if (!std::binary_search(label_set.begin(), label_set.end(),
                                node.label)) {
          throw Error("tree leaf label " + std::to_string(node.label) +
                      " outside the label set");
        }
      } else if (static_cast<std::size_t>(node.feature) >= schema.size()) {
        throw Error("tree splits on feature " + std::to_string(node.feature) +
                    " beyond schema width");
      }
    }
  }
  BlackBoxModel model;
  model.kind_ = Kind::kBaggedForest;
  model.schema_ = std::move(schema);
  model.trees_ = std::move(trees);
  model.label_set_ = std::move(label_set);
  return model;
}

BlackBoxModel BlackBoxModel::TableOracle(FeatureSchema schema, Matrix points,
                                         std::vector<int> labels) {
  schema.Validate();
  if (points.rows() == 0) throw Error("table oracle needs at least one point");
  if (points.cols() != schema.size()) {
    throw Error("table oracle points do not match schema width");
  }
  if (labels.size() != points.rows()) {
    throw Error("table oracle label count does not match point count");
  }
  BlackBoxModel model;
  model.kind_ = Kind::kTableOracle;
  model.schema_ = std::move(schema);
  model.label_set_ = labels;
  std::sort(model.label_set_.begin(), model.label_set_.end());
  model.label_set_.erase(
      std::unique(model.label_set_.begin(), model.label_set_.end()),
      model.label_set_.end());
  model.table_points_ = std::move(points);
  model.table_labels_ = std::move(labels);
  return model;
}

int BlackBoxModel::Predict(std::span<const double> x) const {
  if (x.size() != schema_.size()) {
    throw Error("predict: point has " + std::to_string(x.size()) +
                " features, model expects " + std::to_string(schema_.size()));
  }
  if (kind_ == Kind::kTableOracle) {
    std::size_t best = 0;
    double best_distance = MixedDistance(schema_, table_points_.Row(0), x);
    for (std::size_t i = 1; i < table_points_.rows() && best_distance > 0.0;
         ++i) {
      const double d = MixedDistance(schema_, table_points_.Row(i), x);
      if (d < best_distance) {
        best = i;
        best_distance = d;
      }
    }
    return table_labels_[best];
  }
  // Label sets are small; count votes by position in the sorted label set.
  std::vector<int> votes(label_set_.size(), 0);
  for (const auto& tree : trees_) {
    const int label = tree.Predict(x);
    const auto pos =
        std::lower_bound(label_set_.begin(), label_set_.end(), label) -
        label_set_.begin();
    ++votes[static_cast<std::size_t>(pos)];
  }
  std::size_t best = 0;
  for (std::size_t k = 1; k < votes.size(); ++k) {
    if (votes[k] > votes[best]) best = k;
  }
  return label_set_[best];
}

std::vector<int> BlackBoxModel::PredictAll(MatrixView points,
                                           ExecPolicy policy) const {
  const auto n = static_cast<std::int64_t>(points.rows());
  std::vector<int> out(points.rows());
  if (points.rows() > 0 && points.cols() != schema_.size()) {
    throw Error("predict: point width does not match model");
  }
  if (policy == ExecPolicy::kSerial) {
    for (std::int64_t i = 0; i < n; ++i) out[i] = Predict(points.Row(i));
    return out;
  }
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) out[i] = Predict(points.Row(i));
  return out;
}

std::string BlackBoxModel::Serialize() const {
  std::ostringstream out;
  out << kMagic << ' ' << kVersion << ' ' << KindName(kind_) << ' '
      << trees_.size() << '\n';
  out << "features " << schema_.size() << ' ' << schema_.KindString() << '\n';
  out << "labels";
  for (int label : label_set_) out << ' ' << label;
  out << '\n';
  if (kind_ == Kind::kBaggedForest) {
    for (std::size_t t = 0; t < trees_.size(); ++t) {
      out << "tree " << t << ' ' << trees_[t].nodes().size() << '\n';
      trees_[t].WriteRecords(out);
    }
  } else {
    out << "points " << table_points_.rows() << '\n';
    for (std::size_t i = 0; i < table_points_.rows(); ++i) {
      out << "point " << table_labels_[i];
      for (double v : table_points_.Row(i)) out << ' ' << FormatDouble(v);
      out << '\n';
    }
  }
  return out.str();
}

BlackBoxModel BlackBoxModel::Parse(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  auto next_line = [&](const char* what) {
    if (!std::getline(in, line)) {
      throw ParseError(std::string("model: missing ") + what, 0);
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return Tokens(line);
  };
  auto header = next_line("header");
  if (header.size() != 4 || header[0] != kMagic) {
    throw ParseError("model: bad header '" + line + "'", 0);
  }
  if (header[1] != kVersion) {
    throw ParseError("model: unsupported version '" + header[1] + "'", 0);
  }
  const std::string kind = header[2];
  const long long n_trees = ToInteger(header[3]);
  if (kind != "bagged_forest" && kind != "table_oracle") {
    throw ParseError("model: unknown kind '" + kind + "'", 0);
  }

  auto features = next_line("features line");
  if (features.size() != 3 || features[0] != "features") {
    throw ParseError("model: bad features line '" + line + "'", 0);
  }
  FeatureSchema schema = FeatureSchema::FromKindString(features[2]);
  if (static_cast<long long>(schema.size()) != ToInteger(features[1])) {
    throw ParseError("model: feature count does not match kind string", 0);
  }

  auto labels_line = next_line("labels line");
  if (labels_line.empty() || labels_line[0] != "labels") {
    throw ParseError("model: bad labels line '" + line + "'", 0);
  }
  std::vector<int> label_set;
  for (std::size_t i = 1; i < labels_line.size(); ++i) {
    label_set.push_back(static_cast<int>(ToInteger(labels_line[i])));
  }

  if (kind == "bagged_forest") {
    std::vector<DecisionTree> trees;
    for (long long t = 0; t < n_trees; ++t) {
      auto tree_line = next_line("tree record");
      if (tree_line.size() != 3 || tree_line[0] != "tree" ||
          ToInteger(tree_line[1]) != t) {
        throw ParseError("model: bad tree line '" + line + "'", 0);
      }
      const long long count = ToInteger(tree_line[2]);
      if (count <= 0) throw ParseError("model: empty tree", 0);
      std::vector<std::string> records;
      for (long long k = 0; k < count; ++k) {
        next_line("node record");
        records.push_back(line);
      }
      trees.push_back(DecisionTree::FromRecords(records));
    }
    return Forest(std::move(schema), std::move(trees), std::move(label_set));
  }

  auto points_line = next_line("points line");
  if (points_line.size() != 2 || points_line[0] != "points") {
    throw ParseError("model: bad points line '" + line + "'", 0);
  }
  const long long count = ToInteger(points_line[1]);
  const std::size_t m = schema.size();
  Matrix points(static_cast<std::size_t>(count), m);
  std::vector<int> labels;
  for (long long i = 0; i < count; ++i) {
    auto record = next_line("point record");
    if (record.size() != m + 2 || record[0] != "point") {
      throw ParseError("model: bad point record '" + line + "'", 0);
    }
    labels.push_back(static_cast<int>(ToInteger(record[1])));
    for (std::size_t f = 0; f < m; ++f) {
      points(static_cast<std::size_t>(i), f) = ToReal(record[f + 2]);
    }
  }
  return TableOracle(std::move(schema), std::move(points), std::move(labels));
}

void BlackBoxModel::Save(const std::filesystem::path& path) const {
  WriteFileAtomic(path, Serialize());
}

BlackBoxModel BlackBoxModel::Load(const std::filesystem::path& path) {
  return Parse(ReadFile(path));
}

BlackBoxModel TrainBaggedForest(const Dataset& dataset, int n_trees,
                                std::uint64_t seed, const TreeParams& params) {
  if (dataset.rows() == 0) throw Error("cannot train on an empty dataset");
  if (n_trees < 1) throw Error("forest needs n_trees >= 1");
  const std::size_t n = dataset.rows();
  const std::size_t m = dataset.cols();
  std::vector<int> all_features(m);
  for (std::size_t f = 0; f < m; ++f) all_features[f] = static_cast<int>(f);

  std::vector<DecisionTree> trees;
  trees.reserve(static_cast<std::size_t>(n_trees));
  std::vector<double> sample(n * m);
  std::vector<int> sample_labels(n);
  for (int t = 0; t < n_trees; ++t) {
    Rng rng(DeriveSeed(seed, static_cast<std::uint64_t>(t)));
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t pick = rng.Below(n);
      const auto row = dataset.Row(pick);
      std::copy(row.begin(), row.end(), sample.begin() + i * m);
      sample_labels[i] = dataset.labels()[pick];
    }
    trees.push_back(
        FitTree(MatrixView(sample, n, m), sample_labels, all_features, params));
  }
  return BlackBoxModel::Forest(dataset.schema(), std::move(trees),
                               dataset.LabelSet());
}

BlackBoxModel MakeTableOracle(
    const FeatureSchema& schema,
    const std::vector<std::pair<std::vector<double>, int>>& pairs) {
  std::map<std::vector<double>, int> seen;
  std::vector<double> data;
  std::vector<int> labels;
  for (const auto& [point, label] : pairs) {
    if (point.size() != schema.size()) {
      throw Error("table oracle point width does not match schema");
    }
    const auto [it, inserted] = seen.emplace(point, label);
    if (!inserted) {
      if (it->second != label) {
        throw Error("table oracle: conflicting labels for a repeated point");
      }
      continue;
    }
    data.insert(data.end(), point.begin(), point.end());
    labels.push_back(label);
  }
  const std::size_t rows = labels.size();
  return BlackBoxModel::TableOracle(
      schema, Matrix(std::move(data), rows, schema.size()), std::move(labels));
}

}  // namespace aggrex
