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

#include <algorithm>
#include <bit>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "aggrex/aggregate.h"
#include "aggrex/error.h"

namespace aggrex {

AggregateSolution BruteForce(const CandidatePool& pool, int budget,
                             double fidelity_floor) {
  if (budget < 0) throw Error("budget K must be >= 0");
  if (pool.candidates > kBruteForceMaxCandidates) {
    throw Error("brute force refuses pools with more than " +
                std::to_string(kBruteForceMaxCandidates) + " candidates");
  }
  std::size_t disagreeing = 0;
  for (std::size_t i = 0; i < pool.candidates; ++i) {
    for (std::size_t j = 0; j < pool.points; ++j) {
      disagreeing += pool.Within(i, j) && !pool.Agrees(i, j);
    }
  }
  if (disagreeing > kBruteForceMaxDisagreeingPairs) {
    throw Error("brute force refuses pools with more than " +
                std::to_string(kBruteForceMaxDisagreeingPairs) +
                " disagreeing in-ball pairs");
  }

  AggregateSolution best;
  int best_value = -1;
  const std::uint32_t selections = std::uint32_t{1} << pool.candidates;
  for (std::uint32_t mask = 0; mask < selections; ++mask) {
    if (std::popcount(mask) > budget) continue;
    std::vector<int> selected;
    for (std::size_t i = 0; i < pool.candidates; ++i) {
      if (mask >> i & 1) selected.push_back(static_cast<int>(i));
    }
    // Agreeing claims never hurt a fidelity row, so they are always taken.
    std::vector<char> covered(pool.points, 0);
    for (int i : selected) {
      for (std::size_t j = 0; j < pool.points; ++j) {
        if (pool.Within(i, j) && pool.Agrees(i, j)) covered[j] = 1;
      }
    }
    // Disagreeing claims on points not already covered.
    std::vector<std::pair<int, int>> open;
    for (std::size_t k = 0; k < selected.size(); ++k) {
      const int i = selected[k];
      for (std::size_t j = 0; j < pool.points; ++j) {
        if (pool.Within(i, j) && !pool.Agrees(i, j) && !covered[j]) {
          open.emplace_back(static_cast<int>(k), static_cast<int>(j));
        }
      }
    }
    const std::uint32_t claim_sets = std::uint32_t{1} << open.size();
    for (std::uint32_t pick = 0; pick < claim_sets; ++pick) {
      std::vector<std::vector<int>> claims(selected.size());
      for (std::size_t k = 0; k < selected.size(); ++k) {
        for (std::size_t j = 0; j < pool.points; ++j) {
          if (pool.Within(selected[k], j) && pool.Agrees(selected[k], j)) {
            claims[k].push_back(static_cast<int>(j));
          }
        }
      }
      for (std::size_t p = 0; p < open.size(); ++p) {
        if (pick >> p & 1) claims[open[p].first].push_back(open[p].second);
      }
      bool feasible = true;
      for (std::size_t k = 0; k < selected.size() && feasible; ++k) {
        double row = 0.0;
        for (int j : claims[k]) {
          row += (pool.Agrees(selected[k], j) ? 1.0 : 0.0) - fidelity_floor;
        }
        feasible = row >= -kFidelityRowTolerance;
      }
      if (!feasible) continue;
      std::vector<char> hit = covered;
      for (std::size_t p = 0; p < open.size(); ++p) {
        if (pick >> p & 1) hit[open[p].second] = 1;
      }
      int value = 0;
      for (char h : hit) value += h;
      if (value > best_value) {
        best_value = value;
        best.selected = selected;
        for (auto& claim : claims) std::sort(claim.begin(), claim.end());
        best.claims = std::move(claims);
      }
    }
  }
  FinishSolution(pool, best);
  best.status = SolveStatus::kOptimal;
  return best;
}

}  // namespace aggrex
