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

#ifndef AGGREX_METRIC_H_
#define AGGREX_METRIC_H_

#include <span>

#include "aggrex/data.h"

namespace aggrex {

// Mixed metric over a schema: the larger of the l-infinity distance over
// continuous features and the Hamming (l1) distance over binary features.
// d(a, b) <= r is the product ball the sampler draws from: every continuous
// coordinate within r and at most floor(r) binary flips.
double MixedDistance(const FeatureSchema& schema, std::span<const double> a,
                     std::span<const double> b);

inline bool WithinRadius(const FeatureSchema& schema,
                         std::span<const double> center,
                         std::span<const double> x, double radius) {
  return MixedDistance(schema, center, x) <= radius;
}

}  // namespace aggrex

#endif  // AGGREX_METRIC_H_
