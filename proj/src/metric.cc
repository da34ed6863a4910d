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

#include "aggrex/metric.h"

#include <algorithm>
#include <cmath>

namespace aggrex {

double MixedDistance(const FeatureSchema& schema, std::span<const double> a,
                     std::span<const double> b) {
  double linf = 0.0;
  double hamming = 0.0;
  for (std::size_t f = 0; f < schema.size(); ++f) {
    const double d = std::abs(a[f] - b[f]);
    if (schema.IsBinary(f)) {
      hamming += d;
    } else {
      linf = std::max(linf, d);
    }
  }
  return std::max(linf, hamming);
}

}  // namespace aggrex
