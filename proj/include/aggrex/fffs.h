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

#ifndef AGGREX_FFFS_H_
#define AGGREX_FFFS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "aggrex/data.h"
#include "aggrex/matrix.h"
#include "aggrex/parallel.h"
#include "json.hpp"

namespace aggrex {

inline constexpr int kDefaultContinuousBins = 3;
inline constexpr double kDefaultMiEpsilon = 1e-9;

// Histogram bin of every (sample, feature) pair. This is the membership
// tensor M in compact form: M[b, f, x] = 1 iff bin(x, f) == b.
struct BinAssignment {
  std::size_t samples = 0;
  std::size_t features = 0;
  int max_bins = 0;
  // Per feature: number of bins actually used (1 for a degenerate
  // continuous range, 2 for binary features).
  std::vector<int> bin_count;
  // Per feature: lower bound, interior cut points, upper bound.
  std::vector<std::vector<double>> edges;
  // Feature-major: the bins of feature f for all samples are contiguous.
  std::vector<std::uint8_t> assignment;

  int bin(std::size_t sample, std::size_t feature) const {
    return assignment[feature * samples + sample];
  }
};

// Continuous features get `bins` equal-width bins over the sample range (the
// maximum goes to the top bin; a zero-width range gives one bin). Binary
// features get bins {0} and {1}. Throws Error for bins < 2 or > 255, or no
// samples.
BinAssignment BuildHistograms(MatrixView samples, const FeatureSchema& schema,
                              int bins = kDefaultContinuousBins);

// Labels re-coded to 0..classes-1 (sorted order of the raw labels).
struct EncodedLabels {
  std::vector<int> code;
  int classes = 0;
};
EncodedLabels EncodeLabels(std::span<const int> labels);

// Disjoint sets of sample indices; each set is one conditioning context.
using PartitionLeaves = std::vector<std::vector<int>>;

// The single leaf {0, ..., samples-1}.
PartitionLeaves RootLeaves(std::size_t samples);

// Plug-in estimate of I(feature; y | selected) in nats:
//   sum over leaves l, over x in l, of
//   (1/N) log[ p_l(b(x), y(x)) / (p_l(b(x)) p_l(y(x))) ]
// where p_l are empirical frequencies within l and N is the total sample
// count. Throws Error for a feature index out of range.
double CondMutualInfo(int feature, const EncodedLabels& y,
                      const PartitionLeaves& leaves, const BinAssignment& bins);

// Splits every leaf by the bin of `feature`. Cells smaller than
// `min_leaf_size` are dropped.
PartitionLeaves BinPartition(const BinAssignment& bins,
                             const PartitionLeaves& leaves, int feature,
                             std::size_t min_leaf_size = 2);

struct FffsOptions {
  int bins = kDefaultContinuousBins;
  // A feature is selected only when its estimate exceeds this.
  double eps_mi = kDefaultMiEpsilon;
  // 0 means no cap.
  std::size_t max_selected = 0;
  std::size_t min_leaf_size = 2;
  ExecPolicy policy = ExecPolicy::kParallel;
};

struct SelectionRound {
  std::vector<int> candidates;
  std::vector<double> candidate_mi;
  int best_feature = -1;
  double best_mi = 0.0;
  bool selected = false;
  std::size_t leaves_after = 0;
};

struct SelectionState {
  std::vector<int> selected;
  // Sorted ascending.
  std::vector<int> unselected;
  PartitionLeaves leaves;
  std::vector<SelectionRound> trace;
};

// Initial state: nothing selected, every feature unselected, one root leaf.
SelectionState InitialSelectionState(const BinAssignment& bins);

// CondMutualInfo for each candidate feature. The parallel kernel evaluates
// candidates concurrently; both return identical values.
std::vector<double> ScoreFeaturesSerial(std::span<const int> candidates,
                                        const EncodedLabels& y,
                                        const PartitionLeaves& leaves,
                                        const BinAssignment& bins);
std::vector<double> ScoreFeaturesParallel(std::span<const int> candidates,
                                          const EncodedLabels& y,
                                          const PartitionLeaves& leaves,
                                          const BinAssignment& bins);

// One forward-selection step. Picks the unselected feature with the largest
// estimate (lowest index on ties). If that estimate is <= eps_mi the
// unselected set is cleared; otherwise the feature moves to `selected` and
// the leaves are refined by BinPartition.
SelectionState SelectFeature(SelectionState state, const BinAssignment& bins,
                             const EncodedLabels& y,
                             const FffsOptions& options = {});

// Repeats SelectFeature until no unselected features or no leaves remain (or
// the optional cap is reached). Returns the final state; `selected` holds the
// features in selection order.
SelectionState RecursionFfs(SelectionState state, const BinAssignment& bins,
                            const EncodedLabels& y,
                            const FffsOptions& options = {});

// Histograms followed by RecursionFfs from the initial state.
std::vector<int> Fffs(MatrixView samples, std::span<const int> y,
                      const FeatureSchema& schema,
                      const FffsOptions& options = {});
SelectionState FffsWithTrace(MatrixView samples, std::span<const int> y,
                             const FeatureSchema& schema,
                             const FffsOptions& options = {});

// Debug dump: rounds, candidate estimates, chosen feature, leaf counts.
nlohmann::json TraceToJson(const SelectionState& state);

}  // namespace aggrex

#endif  // AGGREX_FFFS_H_
