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

#include <string>
#include <vector>

#include "aggrex/aggregate.h"

namespace aggrex {

std::vector<std::string> VerifySolution(const CandidatePool& pool, int budget,
                                        double fidelity_floor,
                                        const AggregateSolution& solution) {
  std::vector<std::string> issues;
  const std::size_t c = pool.candidates;
  const std::size_t n = pool.points;
  auto pair = [](int i, int j) {
    return std::to_string(i) + "," + std::to_string(j);
  };

  std::vector<int> w(c, 0);
  for (std::size_t k = 0; k < solution.selected.size(); ++k) {
    const int i = solution.selected[k];
    if (i < 0 || static_cast<std::size_t>(i) >= c) {
      issues.push_back("selected candidate " + std::to_string(i) +
                       " out of range");
      return issues;
    }
    if (k > 0 && solution.selected[k - 1] >= i) {
      issues.push_back("selected candidates are not strictly increasing");
    }
    w[i] = 1;
  }
  if (solution.claims.size() != solution.selected.size()) {
    issues.push_back("claims do not line up with selected candidates");
    return issues;
  }

  std::vector<std::vector<int>> z(c, std::vector<int>(n, 0));
  for (std::size_t k = 0; k < solution.claims.size(); ++k) {
    const int i = solution.selected[k];
    for (int j : solution.claims[k]) {
      if (j < 0 || static_cast<std::size_t>(j) >= n) {
        issues.push_back("claimed point " + std::to_string(j) +
                         " out of range");
        continue;
      }
      if (z[i][j]) issues.push_back("duplicate claim " + pair(i, j));
      z[i][j] = 1;
    }
  }
  std::vector<int> y(n, 0);
  for (int j : solution.covered) {
    if (j < 0 || static_cast<std::size_t>(j) >= n) {
      issues.push_back("covered point " + std::to_string(j) + " out of range");
      continue;
    }
    y[j] = 1;
  }

  for (std::size_t i = 0; i < c; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (z[i][j] > w[i]) {
        issues.push_back("link row violated at " + pair(i, j));
      }
      if (z[i][j] && !pool.Within(i, j)) {
        issues.push_back("radius row violated at " + pair(i, j));
      }
      if (y[j] < z[i][j]) {
        issues.push_back("cover row violated at " + pair(i, j));
      }
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    int sum = 0;
    for (std::size_t i = 0; i < c; ++i) sum += z[i][j];
    if (y[j] > sum)
      issues.push_back("any row violated at " + std::to_string(j));
  }
  for (std::size_t i = 0; i < c; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (z[i][j]) row += (pool.Agrees(i, j) ? 1.0 : 0.0) - fidelity_floor;
    }
    if (row < -kFidelityRowTolerance) {
      issues.push_back("fidelity row violated at candidate " +
                       std::to_string(i));
    }
  }
  int used = 0;
  for (int v : w) used += v;
  if (used > budget) issues.push_back("budget row violated");

  int objective = 0;
  for (int v : y) objective += v;
  if (objective != solution.ip_coverage) {
    issues.push_back("ip_coverage " + std::to_string(solution.ip_coverage) +
                     " does not match sum of y " + std::to_string(objective));
  }
  int ball = 0;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < c; ++i) {
      if (w[i] && pool.Within(i, j)) {
        ++ball;
        break;
      }
    }
  }
  if (ball != solution.ball_coverage) {
    issues.push_back("ball_coverage " + std::to_string(solution.ball_coverage) +
                     " does not match the selected balls " +
                     std::to_string(ball));
  }
  return issues;
}

}  // namespace aggrex
