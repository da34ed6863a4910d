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

#ifndef AGGREX_EXPLAINER_H_
#define AGGREX_EXPLAINER_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "aggrex/blackbox.h"
#include "aggrex/data.h"
#include "aggrex/fffs.h"
#include "aggrex/parallel.h"
#include "aggrex/sampler.h"
#include "aggrex/tree.h"
#include "json.hpp"

namespace aggrex {

struct ExplainerParams {
  std::size_t samples = kDefaultSampleCount;
  FffsOptions fffs;
  // Unregularized by default: depth and leaf-size caps only bound runaway
  // growth.
  TreeParams tree{32, 1};
};

// Surrogate decision tree valid within `radius` of `center`.
struct LocalExplainer {
  std::size_t center_index = 0;
  std::vector<double> center;
  double radius = 0.0;
  bool filtered = false;
  // FFFS output in selection order (filtered), or every feature (unfiltered).
  std::vector<int> selected_features;
  DecisionTree tree;
  double train_fidelity = 0.0;

  int Predict(std::span<const double> x) const { return tree.Predict(x); }
  int leaf_count() const { return tree.leaf_count(); }
};

// Fits the surrogate on an already labelled sample set. With `filtered`, the
// tree may only split on FFFS-selected features and an empty selection gives
// a single majority leaf.
LocalExplainer FitSurrogate(const SampleSet& samples,
                            const FeatureSchema& schema, bool filtered,
                            const ExplainerParams& params = {});

// Samples the ball, labels it with the black box and fits the surrogate.
LocalExplainer TrainLocalExplainer(const BlackBoxModel& model,
                                   std::span<const double> center,
                                   double radius, bool filtered,
                                   std::uint64_t seed,
                                   const ExplainerParams& params = {},
                                   std::size_t center_index = 0);

// Fraction of `points` on which the explainer and the black box agree.
// Throws Error for an empty point set.
double LocalFidelity(const LocalExplainer& explainer,
                     const BlackBoxModel& model, MatrixView points);

struct ExplainJob {
  std::vector<double> radii;
  bool filtered = true;
  bool unfiltered = false;
  std::uint64_t root_seed = 1;
  ExplainerParams params;
};

// One explainer per (radius, dataset point, variant), ordered by radius, then
// center, then unfiltered before filtered. Both variants of a center share
// the sample set drawn with DeriveSeed(root_seed, center, radius index). The
// parallel kernel runs centers concurrently; results match the serial one.
std::vector<LocalExplainer> TrainExplainersSerial(const BlackBoxModel& model,
                                                  const Dataset& dataset,
                                                  const ExplainJob& job);
std::vector<LocalExplainer> TrainExplainersParallel(const BlackBoxModel& model,
                                                    const Dataset& dataset,
                                                    const ExplainJob& job);

nlohmann::json ExplainerToJson(const LocalExplainer& explainer);
LocalExplainer ExplainerFromJson(const nlohmann::json& json);

// Human-readable nested rules with a one-line header.
std::string ExplainerToRules(const LocalExplainer& explainer,
                             const FeatureSchema& schema);

}  // namespace aggrex

#endif  // AGGREX_EXPLAINER_H_
