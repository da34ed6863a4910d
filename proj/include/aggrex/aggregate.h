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

#ifndef AGGREX_AGGREGATE_H_
#define AGGREX_AGGREGATE_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aggrex/blackbox.h"
#include "aggrex/data.h"
#include "aggrex/explainer.h"
#include "json.hpp"

namespace aggrex {

// Slack allowed on a fidelity row: sum_j (a_ij - floor) z_ij >= -tolerance.
// The solvers, the oracle and the verifier all use this value.
inline constexpr double kFidelityRowTolerance = 1e-9;

// Candidate explainers against the dataset points they may cover.
// within(i, j): point j lies in candidate i's ball. agree(i, j): the
// candidate's surrogate and the black box agree at point j.
struct CandidatePool {
  std::size_t candidates = 0;
  std::size_t points = 0;
  // Dataset index of each candidate's center.
  std::vector<std::size_t> centers;
  std::vector<double> radii;
  std::vector<std::uint8_t> within;  // candidates x points
  std::vector<std::uint8_t> agree;   // candidates x points

  bool Within(std::size_t i, std::size_t j) const {
    return within[i * points + j] != 0;
  }
  bool Agrees(std::size_t i, std::size_t j) const {
    return agree[i * points + j] != 0;
  }

  // Square pool where candidate i is centered on point i. Matrices are
  // row-per-candidate. Throws Error on ragged input.
  static CandidatePool FromMatrices(
      const std::vector<std::vector<bool>>& within,
      const std::vector<std::vector<bool>>& agree);
};

// One candidate per explainer. Distances use MixedDistance with each
// explainer's radius; agreement compares the surrogate with the black box at
// every dataset point. Throws SchemaError on width mismatch or a center
// index outside the dataset.
CandidatePool BuildPoolSerial(const Dataset& dataset,
                              std::span<const LocalExplainer> explainers,
                              const BlackBoxModel& model);
CandidatePool BuildPoolParallel(const Dataset& dataset,
                                std::span<const LocalExplainer> explainers,
                                const BlackBoxModel& model);

enum class SolveStatus { kOptimal, kFeasible, kInfeasible };
std::string StatusName(SolveStatus status);

struct AggregateSolution {
  // Candidates with w_i = 1, ascending.
  std::vector<int> selected;
  // claims[k]: points with z_ij = 1 for i = selected[k], ascending.
  std::vector<std::vector<int>> claims;
  // Points with y_j = 1, ascending.
  std::vector<int> covered;
  int ip_coverage = 0;
  // Points inside at least one selected ball (coverage over full balls).
  int ball_coverage = 0;
  // Minimum over selected candidates of the agreement rate over the full
  // ball; unset when nothing is selected.
  std::optional<double> ball_min_fidelity;
  // The same minimum over claimed point sets only.
  std::optional<double> claimed_min_fidelity;
  SolveStatus status = SolveStatus::kOptimal;
  std::uint64_t nodes_explored = 0;
  double wall_time_ms = 0.0;
};

// Points inside at least one selected ball.
int Coverage(std::span<const int> selected, const CandidatePool& pool);
// Minimum agreement rate over the full balls of the selected candidates. A
// candidate whose ball holds no point counts as 1. Throws Error when nothing
// is selected.
double Fidelity(std::span<const int> selected, const CandidatePool& pool);

enum class VarFamily { kW, kY, kZ };
enum class RowFamily { kLink, kCover, kAny, kFidelity, kBudget };
enum class RowSense { kLessEqual, kGreaterEqual };

struct IpVariable {
  VarFamily family;
  int i = -1;
  int j = -1;
  std::string Name() const;
};

struct IpTerm {
  int var;
  double coef;
};

struct IpRow {
  RowFamily family;
  std::string name;
  std::vector<IpTerm> terms;
  RowSense sense;
  double rhs;
};

// The coverage integer program over binaries w_i, y_j, z_ij:
//   max sum_j y_j
//   z_ij <= w_i, y_j >= z_ij, y_j <= sum_i z_ij,
//   sum_j (a_ij - floor) z_ij >= 0, sum_i w_i <= K.
// The radius rows are presolved: z_ij exists only where within(i, j).
struct IpModel {
  std::size_t candidates = 0;
  std::size_t points = 0;
  int budget = 0;
  double fidelity_floor = 0.0;
  std::vector<IpVariable> variables;
  // Objective variables, each with coefficient 1.
  std::vector<int> objective;
  std::vector<IpRow> rows;
  // -1 where the pair is outside the ball.
  std::vector<int> z_index;

  int WVar(std::size_t i) const { return static_cast<int>(i); }
  int YVar(std::size_t j) const { return static_cast<int>(candidates + j); }
  int ZVar(std::size_t i, std::size_t j) const {
    return z_index[i * points + j];
  }
  std::size_t CountRows(RowFamily family) const;
  std::size_t CountVariables(VarFamily family) const;
};

// Throws Error for K < 0 or a floor outside [0, 1].
IpModel BuildIp(const CandidatePool& pool, int budget, double fidelity_floor);

struct SolverOptions {
  // Branch-and-bound node cap; 0 means none. Hitting it downgrades the
  // status to kFeasible.
  std::uint64_t node_limit = 0;
};

// Exact branch-and-bound over w in index order (w_i = 1 branch first). Each
// node's selection is scored by the exact inner claim problem: every
// agreeing in-ball point is claimed and the remaining in-ball points are
// assigned by a capacity-constrained bipartite matching. Nodes are pruned by
// a coverage bound over the candidates' claimable sets. The first optimum in
// search order is kept; selected candidates that add nothing are then
// dropped in index order.
AggregateSolution SolveExact(const IpModel& model, const CandidatePool& pool,
                             const SolverOptions& options = {});

// Adds the candidate with the largest exact marginal coverage gain (lowest
// index on ties) until K candidates or no positive gain. Status kFeasible.
AggregateSolution SolveGreedy(const CandidatePool& pool, int budget,
                              double fidelity_floor);

inline constexpr std::size_t kBruteForceMaxCandidates = 12;
inline constexpr std::size_t kBruteForceMaxDisagreeingPairs = 20;

// Exhaustive oracle over every selection of <= K candidates and every claim
// set for the disagreeing in-ball pairs. Throws Error when the pool exceeds
// the limits above.
AggregateSolution BruteForce(const CandidatePool& pool, int budget,
                             double fidelity_floor);

// Independent re-check of every row of the integer program against the raw
// pool, plus the reported coverage figures. Empty when the solution is valid.
std::vector<std::string> VerifySolution(const CandidatePool& pool, int budget,
                                        double fidelity_floor,
                                        const AggregateSolution& solution);

// {selected, z_assignment, covered, ip_coverage, ball_coverage,
//  ball_min_fidelity, claimed_min_fidelity, status, nodes_explored,
//  wall_time_ms}. wall_time_ms is null unless `with_timing`.
nlohmann::json SolutionToJson(const AggregateSolution& solution,
                              bool with_timing);

// Fills covered, ip_coverage, ball_coverage and both fidelity figures from
// selected and claims.
void FinishSolution(const CandidatePool& pool, AggregateSolution& solution);

}  // namespace aggrex

#endif  // AGGREX_AGGREGATE_H_
