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
#include <cstdint>

#include "aggrex/error.h"

namespace aggrex {

BinAssignment BuildHistograms(MatrixView samples, const FeatureSchema& schema,
                              int bins) {
  if (bins < 2 || bins > 255) throw Error("bin count must be in [2, 255]");
  if (samples.rows() == 0) throw Error("cannot bin an empty sample set");
  if (samples.cols() != schema.size()) {
    throw Error("samples do not match schema width");
  }
  const std::size_t n = samples.rows();
  const std::size_t m = samples.cols();
  BinAssignment out;
  out.samples = n;
  out.features = m;
  out.max_bins = bins;
  out.bin_count.assign(m, 0);
  out.edges.assign(m, {});
  out.assignment.assign(n * m, 0);

  for (std::size_t f = 0; f < m; ++f) {
    std::uint8_t* column = out.assignment.data() + f * n;
    if (schema.IsBinary(f)) {
      out.bin_count[f] = 2;
      out.edges[f] = {0.0, 0.5, 1.0};
      for (std::size_t i = 0; i < n; ++i) {
        column[i] = samples(i, f) == 1.0 ? 1 : 0;
      }
      continue;
    }
    double lo = samples(0, f);
    double hi = lo;
    for (std::size_t i = 1; i < n; ++i) {
      lo = std::min(lo, samples(i, f));
      hi = std::max(hi, samples(i, f));
    }
    if (!(hi > lo)) {
      out.bin_count[f] = 1;
      out.edges[f] = {lo};
      continue;  // every sample already in bin 0
    }
    const double width = (hi - lo) / bins;
    out.bin_count[f] = bins;
    out.edges[f].push_back(lo);
    for (int k = 1; k < bins; ++k) out.edges[f].push_back(lo + k * width);
    out.edges[f].push_back(hi);
    for (std::size_t i = 0; i < n; ++i) {
      const double position = (samples(i, f) - lo) / width;
      int b = static_cast<int>(std::floor(position));
      column[i] = static_cast<std::uint8_t>(std::clamp(b, 0, bins - 1));
    }
  }
  return out;
}

EncodedLabels EncodeLabels(std::span<const int> labels) {
  std::vector<int> classes(labels.begin(), labels.end());
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  EncodedLabels out;
  out.classes = static_cast<int>(classes.size());
  out.code.reserve(labels.size());
  for (int label : labels) {
    out.code.push_back(static_cast<int>(
        std::lower_bound(classes.begin(), classes.end(), label) -
        classes.begin()));
  }
  return out;
}

PartitionLeaves RootLeaves(std::size_t samples) {
  PartitionLeaves leaves(1);
  leaves[0].resize(samples);
  for (std::size_t i = 0; i < samples; ++i) leaves[0][i] = static_cast<int>(i);
  return leaves;
}

double CondMutualInfo(int feature, const EncodedLabels& y,
                      const PartitionLeaves& leaves,
                      const BinAssignment& bins) {
  if (feature < 0 || static_cast<std::size_t>(feature) >= bins.features) {
    throw Error("feature index " + std::to_string(feature) + " out of range");
  }
  if (y.code.size() != bins.samples) {
    throw Error("label count does not match binned samples");
  }
  const std::size_t num_bins =
      static_cast<std::size_t>(std::max(bins.bin_count[feature], 1));
  const std::size_t classes = static_cast<std::size_t>(std::max(y.classes, 1));
  const std::uint8_t* column =
      bins.assignment.data() + static_cast<std::size_t>(feature) * bins.samples;

  std::vector<std::uint32_t> joint(num_bins * classes);
  std::vector<std::uint32_t> bin_total(num_bins);
  std::vector<std::uint32_t> class_total(classes);
  double total = 0.0;
  for (const auto& leaf : leaves) {
    if (leaf.empty()) continue;
    std::fill(joint.begin(), joint.end(), 0);
    std::fill(bin_total.begin(), bin_total.end(), 0);
    std::fill(class_total.begin(), class_total.end(), 0);
    for (int x : leaf) {
      const std::size_t b = column[x];
      const std::size_t c = static_cast<std::size_t>(y.code[x]);
      ++joint[b * classes + c];
      ++bin_total[b];
      ++class_total[c];
    }
    const double leaf_size = static_cast<double>(leaf.size());
    for (std::size_t b = 0; b < num_bins; ++b) {
      if (bin_total[b] == 0) continue;
      for (std::size_t c = 0; c < classes; ++c) {
        const double count = joint[b * classes + c];
        if (count == 0) continue;
        total += count * std::log(count * leaf_size /
                                  (static_cast<double>(bin_total[b]) *
                                   static_cast<double>(class_total[c])));
      }
    }
  }
  return total / static_cast<double>(bins.samples);
}

PartitionLeaves BinPartition(const BinAssignment& bins,
                             const PartitionLeaves& leaves, int feature,
                             std::size_t min_leaf_size) {
  if (feature < 0 || static_cast<std::size_t>(feature) >= bins.features) {
    throw Error("feature index " + std::to_string(feature) + " out of range");
  }
  const std::size_t num_bins =
      static_cast<std::size_t>(std::max(bins.bin_count[feature], 1));
  const std::uint8_t* column =
      bins.assignment.data() + static_cast<std::size_t>(feature) * bins.samples;
  PartitionLeaves out;
  std::vector<std::vector<int>> cells(num_bins);
  for (const auto& leaf : leaves) {
    for (auto& cell : cells) cell.clear();
    for (int x : leaf) cells[column[x]].push_back(x);
    for (auto& cell : cells) {
      if (!cell.empty() && cell.size() >= min_leaf_size) {
        out.push_back(cell);
      }
    }
  }
  return out;
}

SelectionState InitialSelectionState(const BinAssignment& bins) {
  SelectionState state;
  state.unselected.resize(bins.features);
  for (std::size_t f = 0; f < bins.features; ++f) {
    state.unselected[f] = static_cast<int>(f);
  }
  state.leaves = RootLeaves(bins.samples);
  return state;
}

std::vector<double> ScoreFeaturesSerial(std::span<const int> candidates,
                                        const EncodedLabels& y,
                                        const PartitionLeaves& leaves,
                                        const BinAssignment& bins) {
  std::vector<double> scores(candidates.size());
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    scores[k] = CondMutualInfo(candidates[k], y, leaves, bins);
  }
  return scores;
}

std::vector<double> ScoreFeaturesParallel(std::span<const int> candidates,
                                          const EncodedLabels& y,
                                          const PartitionLeaves& leaves,
                                          const BinAssignment& bins) {
  for (int f : candidates) {
    if (f < 0 || static_cast<std::size_t>(f) >= bins.features) {
      throw Error("feature index " + std::to_string(f) + " out of range");
    }
  }
  std::vector<double> scores(candidates.size());
  const auto count = static_cast<std::int64_t>(candidates.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t k = 0; k < count; ++k) {
    scores[k] = CondMutualInfo(candidates[k], y, leaves, bins);
  }
  return scores;
}

SelectionState SelectFeature(SelectionState state, const BinAssignment& bins,
                             const EncodedLabels& y,
                             const FffsOptions& options) {
  if (state.unselected.empty()) return state;
  SelectionRound round;
  round.candidates = state.unselected;
  round.candidate_mi =
      options.policy == ExecPolicy::kParallel
          ? ScoreFeaturesParallel(round.candidates, y, state.leaves, bins)
          : ScoreFeaturesSerial(round.candidates, y, state.leaves, bins);
  // Candidates are sorted, so the first maximum has the lowest index.
  std::size_t best = 0;
  for (std::size_t k = 1; k < round.candidates.size(); ++k) {
    if (round.candidate_mi[k] > round.candidate_mi[best]) best = k;
  }
  round.best_feature = round.candidates[best];
  round.best_mi = round.candidate_mi[best];
  if (!(round.best_mi > options.eps_mi)) {
    state.unselected.clear();
    round.leaves_after = state.leaves.size();
    state.trace.push_back(std::move(round));
    return state;
  }
  round.selected = true;
  state.selected.push_back(round.best_feature);
  state.unselected.erase(state.unselected.begin() +
                         static_cast<std::ptrdiff_t>(best));
  state.leaves = BinPartition(bins, state.leaves, round.best_feature,
                              options.min_leaf_size);
  round.leaves_after = state.leaves.size();
  state.trace.push_back(std::move(round));
  return state;
}

SelectionState RecursionFfs(SelectionState state, const BinAssignment& bins,
                            const EncodedLabels& y,
                            const FffsOptions& options) {
  std::sort(state.unselected.begin(), state.unselected.end());
  while (!state.unselected.empty() && !state.leaves.empty()) {
    if (options.max_selected > 0 &&
        state.selected.size() >= options.max_selected) {
      break;
    }
    state = SelectFeature(std::move(state), bins, y, options);
  }
  return state;
}

SelectionState FffsWithTrace(MatrixView samples, std::span<const int> y,
                             const FeatureSchema& schema,
                             const FffsOptions& options) {
  if (y.size() != samples.rows()) {
    throw Error("fffs: label count does not match sample count");
  }
  const BinAssignment bins = BuildHistograms(samples, schema, options.bins);
  const EncodedLabels codes = EncodeLabels(y);
  return RecursionFfs(InitialSelectionState(bins), bins, codes, options);
}

std::vector<int> Fffs(MatrixView samples, std::span<const int> y,
                      const FeatureSchema& schema, const FffsOptions& options) {
  return FffsWithTrace(samples, y, schema, options).selected;
}

nlohmann::json TraceToJson(const SelectionState& state) {
  nlohmann::json rounds = nlohmann::json::array();
  for (const auto& round : state.trace) {
    rounds.push_back({{"candidates", round.candidates},
                      {"mi", round.candidate_mi},
                      {"best_feature", round.best_feature},
                      {"best_mi", round.best_mi},
                      {"selected", round.selected},
                      {"leaves_after", round.leaves_after}});
  }
  return {{"selected", state.selected}, {"rounds", rounds}};
}

}  // namespace aggrex
