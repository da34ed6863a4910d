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

#ifndef AGGREX_SAMPLER_H_
#define AGGREX_SAMPLER_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "aggrex/data.h"
#include "aggrex/matrix.h"

namespace aggrex {

inline constexpr std::size_t kDefaultSampleCount = 10000;

// Perturbation points T(center) drawn from the mixed-metric ball.
struct SampleSet {
  std::vector<double> center;
  double radius = 0.0;
  Matrix points;
  // Filled by the caller with black-box predictions.
  std::vector<int> labels;
  std::uint64_t seed = 0;
};

// Draws `count` points uniformly from B(center, radius). Continuous
// coordinates are uniform on [c - r, c + r]; for the binary part an integer k
// is drawn uniformly from {0, ..., min(floor(r), |binary|)} and a uniformly
// random k-subset of binary features is flipped. Each sample is generated
// independently from the center. Throws Error for r < 0 or count == 0.
SampleSet SampleBall(std::span<const double> center, double radius,
                     std::size_t count, const FeatureSchema& schema,
                     std::uint64_t seed);

}  // namespace aggrex

#endif  // AGGREX_SAMPLER_H_
