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

#include "aggrex/sampler.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "aggrex/error.h"
#include "aggrex/rng.h"

namespace aggrex {

SampleSet SampleBall(std::span<const double> center, double radius,
                     std::size_t count, const FeatureSchema& schema,
                     std::uint64_t seed) {
  if (!(radius >= 0.0) || !std::isfinite(radius)) {
    throw Error("sample radius must be finite and >= 0");
  }
  if (count == 0) throw Error("sample count must be >= 1");
  if (center.size() != schema.size()) {
    throw Error("sample center does not match schema width");
  }
  const std::vector<int> continuous = schema.ContinuousFeatures();
  const std::vector<int> binary = schema.BinaryFeatures();
  const std::size_t max_flips =
      radius >= static_cast<double>(binary.size())
          ? binary.size()
          : static_cast<std::size_t>(std::floor(radius));

  SampleSet set;
  set.center.assign(center.begin(), center.end());
  set.radius = radius;
  set.seed = seed;
  set.points = Matrix(count, schema.size());

  Rng rng(seed);
  std::vector<int> order(binary.size());
  for (std::size_t s = 0; s < count; ++s) {
    auto row = set.points.MutableRow(s);
    std::copy(center.begin(), center.end(), row.begin());
    for (int f : continuous) {
      row[f] = center[f] + radius * (2.0 * rng.Uniform() - 1.0);
    }
    const std::size_t flips = rng.Below(max_flips + 1);
    // Partial Fisher-Yates: the first `flips` entries are a uniform subset.
    std::copy(binary.begin(), binary.end(), order.begin());
    for (std::size_t k = 0; k < flips; ++k) {
      const std::size_t pick = k + rng.Below(order.size() - k);
      std::swap(order[k], order[pick]);
      row[order[k]] = 1.0 - row[order[k]];
    }
  }
  return set;
}

}  // namespace aggrex
