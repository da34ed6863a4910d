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

#ifndef AGGREX_RNG_H_
#define AGGREX_RNG_H_

#include <cstdint>
#include <random>

namespace aggrex {

// Finalizer of the SplitMix64 generator; a good 64-bit mixing function.
std::uint64_t Mix64(std::uint64_t x);

// Seed for a sub-stream, e.g. DeriveSeed(root, center_index, radius_index).
std::uint64_t DeriveSeed(std::uint64_t root, std::uint64_t a,
                         std::uint64_t b = 0);

// Seeded random source. The engine is std::mt19937_64 (fully specified by the
// standard); the conversions below are written out so that draws are
// identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) with 53 random bits.
  double Uniform();
  // Uniform integer on [0, n). n must be positive.
  std::uint64_t Below(std::uint64_t n);
  // Standard normal (Box-Muller, one value per call).
  double Normal();

  std::uint64_t Next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace aggrex

#endif  // AGGREX_RNG_H_
