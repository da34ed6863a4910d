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

#include "aggrex/aggregate.h"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <utility>

#include "aggrex/error.h"
#include "aggrex/metric.h"

namespace aggrex {
namespace {

// Fixed-width bit set over dataset points.
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(std::size_t n) : words_((n + 63) / 64, 0) {}

  void Set(std::size_t j) { words_[j / 64] |= std::uint64_t{1} << (j % 64); }
  bool Test(std::size_t j) const { return (words_[j / 64] >> (j % 64)) & 1; }
  int Count() const {
    int total = 0;
    for (std::uint64_t w : words_) total += std::popcount(w);
    return total;
  }
  // |this \ other|
  int CountMinus(const PointSet& other) const {
    int total = 0;
    for (std::size_t k = 0; k < words_.size(); ++k) {
      total += std::popcount(words_[k] & ~other.words_[k]);
    }
    return total;
  }
  void Union(const PointSet& other) {
    for (std::size_t k = 0; k < words_.size(); ++k)
      words_[k] |= other.words_[k];
  }

 private:
  std::vector<std::uint64_t> words_;
};

// Largest k >= 0 such that agree*(1 - floor) - k*floor >= -tolerance.
int DisagreeCapacity(int agree, int disagree, double floor) {
  if (floor <= 0.0) return disagree;
  auto row = [&](long k) {
    return static_cast<double>(agree) * (1.0 - floor) -
           static_cast<double>(k) * floor;
  };
  long k = static_cast<long>(
      std::floor((static_cast<double>(agree) * (1.0 - floor)) / floor));
  k = std::clamp<long>(k, 0, disagree);
  while (k < disagree && row(k + 1) >= -kFidelityRowTolerance) ++k;
  while (k > 0 && row(k) < -kFidelityRowTolerance) --k;
  return static_cast<int>(k);
}

// Exact solver for the claim variables given a fixed selection. Agreeing
// in-ball points are always claimed; each selected candidate may further
// claim up to `capacity` disagreeing points, assigned by maximum bipartite
// b-matching over the points not already covered.
class ClaimSolver {
 public:
  ClaimSolver(const CandidatePool& pool, double floor)
      : pool_(pool),
        agree_set_(pool.candidates, PointSet(pool.points)),
        reach_(pool.candidates, PointSet(pool.points)),
        agree_list_(pool.candidates),
        disagree_list_(pool.candidates),
        capacity_(pool.candidates, 0),
        limit_(pool.candidates, 0),
        adjacency_(pool.points) {
    for (std::size_t i = 0; i < pool.candidates; ++i) {
      for (std::size_t j = 0; j < pool.points; ++j) {
        if (!pool.Within(i, j)) continue;
        if (pool.Agrees(i, j)) {
          agree_list_[i].push_back(static_cast<int>(j));
          agree_set_[i].Set(j);
          reach_[i].Set(j);
        } else {
          disagree_list_[i].push_back(static_cast<int>(j));
        }
      }
      const int a = static_cast<int>(agree_list_[i].size());
      const int d = static_cast<int>(disagree_list_[i].size());
      capacity_[i] = DisagreeCapacity(a, d, floor);
      if (capacity_[i] > 0) {
        for (int j : disagree_list_[i]) reach_[i].Set(j);
      }
      limit_[i] = a + capacity_[i];
    }
  }

  const PointSet& reach(std::size_t i) const { return reach_[i]; }
  int limit(std::size_t i) const { return limit_[i]; }

  // Optimal coverage for `selected`; fills `claims` when non-null.
  int Solve(std::span<const int> selected,
            std::vector<std::vector<int>>* claims) {
    PointSet covered(pool_.points);
    for (int i : selected) covered.Union(agree_set_[i]);
    int value = covered.Count();

    touched_.clear();
    for (std::size_t k = 0; k < selected.size(); ++k) {
      const int i = selected[k];
      if (capacity_[i] == 0) continue;
      for (int j : disagree_list_[i]) {
        if (covered.Test(j)) continue;
        if (adjacency_[j].empty()) touched_.push_back(j);
        adjacency_[j].push_back(static_cast<int>(k));
      }
    }
    std::sort(touched_.begin(), touched_.end());

    assigned_.assign(selected.size(), {});
    visited_.assign(selected.size(), 0);
    selected_ = selected;
    for (int j : touched_) {
      std::fill(visited_.begin(), visited_.end(), 0);
      if (Augment(j)) ++value;
    }
    for (int j : touched_) adjacency_[j].clear();

    if (claims != nullptr) {
      claims->assign(selected.size(), {});
      for (std::size_t k = 0; k < selected.size(); ++k) {
        auto& out = (*claims)[k];
        out = agree_list_[selected[k]];
        out.insert(out.end(), assigned_[k].begin(), assigned_[k].end());
        std::sort(out.begin(), out.end());
      }
    }
    return value;
  }

 private:
  bool Augment(int j) {
    for (int k : adjacency_[j]) {
      if (visited_[k]) continue;
      visited_[k] = 1;
      if (static_cast<int>(assigned_[k].size()) < capacity_[selected_[k]]) {
        assigned_[k].push_back(j);
        return true;
      }
      for (int& other : assigned_[k]) {
        if (Augment(other)) {
          other = j;
          return true;
        }
      }
    }
    return false;
  }

  const CandidatePool& pool_;
  std::vector<PointSet> agree_set_;
  std::vector<PointSet> reach_;
  std::vector<std::vector<int>> agree_list_;
  std::vector<std::vector<int>> disagree_list_;
  std::vector<int> capacity_;
  std::vector<int> limit_;

  // Scratch for Solve.
  std::vector<std::vector<int>> adjacency_;
  std::vector<int> touched_;
  std::vector<std::vector<int>> assigned_;
  std::vector<char> visited_;
  std::span<const int> selected_;
};

void CheckArguments(const CandidatePool& pool, int budget, double floor) {
  if (budget < 0) throw Error("budget K must be >= 0");
  if (!(floor >= 0.0 && floor <= 1.0)) {
    throw Error("fidelity floor must lie in [0, 1]");
  }
  if (pool.within.size() != pool.candidates * pool.points ||
      pool.agree.size() != pool.candidates * pool.points) {
    throw Error("candidate pool matrices do not match its dimensions");
  }
}

double ElapsedMs(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - start)
      .count();
}

class BranchAndBound {
 public:
  BranchAndBound(const CandidatePool& pool, ClaimSolver& solver, int budget,
                 int prune_floor, std::uint64_t node_limit)
      : pool_(pool),
        solver_(solver),
        budget_(budget),
        prune_floor_(prune_floor),
        node_limit_(node_limit),
        suffix_reach_(pool.candidates + 1, PointSet(pool.points)) {
    for (std::size_t t = pool.candidates; t-- > 0;) {
      suffix_reach_[t] = suffix_reach_[t + 1];
      suffix_reach_[t].Union(solver.reach(t));
    }
  }

  void Run() {
    std::vector<int> chosen;
    Visit(0, chosen, PointSet(pool_.points), true);
  }

  int best_value() const { return best_value_; }
  const std::vector<int>& best() const { return best_; }
  std::uint64_t nodes() const { return nodes_; }
  bool truncated() const { return truncated_; }

 private:
  void Visit(std::size_t next, std::vector<int>& chosen, const PointSet& reach,
             bool evaluate) {
    if (truncated_) return;
    if (node_limit_ != 0 && nodes_ >= node_limit_) {
      truncated_ = true;
      return;
    }
    ++nodes_;
    if (evaluate) {
      const int value = solver_.Solve(chosen, nullptr);
      if (value > best_value_) {
        best_value_ = value;
        best_ = chosen;
      }
    }
    if (next >= pool_.candidates ||
        static_cast<int>(chosen.size()) >= budget_) {
      return;
    }
    const int remaining = budget_ - static_cast<int>(chosen.size());
    const int bound = reach.Count() + Optimistic(next, reach, remaining);
    if (bound <= std::max(best_value_, prune_floor_)) return;

    PointSet with = reach;
    with.Union(solver_.reach(next));
    chosen.push_back(static_cast<int>(next));
    Visit(next + 1, chosen, with, true);
    chosen.pop_back();
    Visit(next + 1, chosen, reach, false);
  }

  // Upper bound on the points that up to `k` more candidates from
  // [next, end) can add beyond `reach`.
  int Optimistic(std::size_t next, const PointSet& reach, int k) const {
    // Nothing outside the remaining candidates' reach can be added.
    const int open = suffix_reach_[next].CountMinus(reach);
    std::vector<int> gains;
    gains.reserve(pool_.candidates - next);
    for (std::size_t t = next; t < pool_.candidates; ++t) {
      gains.push_back(
          std::min(solver_.reach(t).CountMinus(reach), solver_.limit(t)));
    }
    const std::size_t take = std::min<std::size_t>(k, gains.size());
    std::partial_sort(gains.begin(), gains.begin() + take, gains.end(),
                      std::greater<>());
    int top = 0;
    for (std::size_t t = 0; t < take; ++t) top += gains[t];

    // Greedy max coverage on the residual sets is within 1 - (1 - 1/k)^k of
    // the best k-cover.
    PointSet grown = reach;
    int greedy = 0;
    std::vector<char> used(pool_.candidates - next, 0);
    for (int round = 0; round < k; ++round) {
      int best_gain = 0;
      std::size_t best_t = 0;
      for (std::size_t t = next; t < pool_.candidates; ++t) {
        if (used[t - next]) continue;
        const int gain = solver_.reach(t).CountMinus(grown);
        if (gain > best_gain) {
          best_gain = gain;
          best_t = t;
        }
      }
      if (best_gain == 0) break;
      used[best_t - next] = 1;
      grown.Union(solver_.reach(best_t));
      greedy += best_gain;
    }
    const double ratio = 1.0 - std::pow(1.0 - 1.0 / k, k);
    const int greedy_bound =
        static_cast<int>(std::floor(greedy / ratio + 1e-9));
    return std::min({top, greedy_bound, open});
  }

  const CandidatePool& pool_;
  ClaimSolver& solver_;
  const int budget_;
  const int prune_floor_;
  const std::uint64_t node_limit_;
  std::vector<PointSet> suffix_reach_;

  int best_value_ = -1;
  std::vector<int> best_;
  std::uint64_t nodes_ = 0;
  bool truncated_ = false;
};

std::vector<int> GreedySelect(ClaimSolver& solver, std::size_t candidates,
                              int budget, std::uint64_t* evaluations) {
  std::vector<int> selected;
  std::vector<char> used(candidates, 0);
  int value = 0;
  while (static_cast<int>(selected.size()) < budget) {
    int best_gain = 0;
    int best_i = -1;
    std::vector<int> trial = selected;
    trial.push_back(0);
    for (std::size_t i = 0; i < candidates; ++i) {
      if (used[i]) continue;
      trial.back() = static_cast<int>(i);
      std::vector<int> sorted = trial;
      std::sort(sorted.begin(), sorted.end());
      const int gain = solver.Solve(sorted, nullptr) - value;
      ++*evaluations;
      if (gain > best_gain) {
        best_gain = gain;
        best_i = static_cast<int>(i);
      }
    }
    if (best_i < 0) break;
    used[best_i] = 1;
    selected.push_back(best_i);
    std::sort(selected.begin(), selected.end());
    value += best_gain;
  }
  return selected;
}

CandidatePool BuildPool(const Dataset& dataset,
                        std::span<const LocalExplainer> explainers,
                        const BlackBoxModel& model, ExecPolicy policy) {
  const std::size_t n = dataset.rows();
  const FeatureSchema& schema = dataset.schema();
  if (model.schema().size() != schema.size()) {
    throw SchemaError("model width does not match the dataset");
  }
  for (const LocalExplainer& e : explainers) {
    if (e.center_index >= n) {
      throw SchemaError("explainer center index " +
                        std::to_string(e.center_index) +
                        " is outside the dataset");
    }
    if (e.center.size() != schema.size()) {
      throw SchemaError("explainer width does not match the dataset");
    }
  }

  CandidatePool pool;
  pool.candidates = explainers.size();
  pool.points = n;
  pool.within.assign(pool.candidates * n, 0);
  pool.agree.assign(pool.candidates * n, 0);
  for (const LocalExplainer& e : explainers) {
    pool.centers.push_back(e.center_index);
    pool.radii.push_back(e.radius);
  }
  const std::vector<int> truth = model.PredictAll(dataset.x(), policy);

  auto fill = [&](std::size_t i) {
    const LocalExplainer& e = explainers[i];
    const auto center = dataset.Row(e.center_index);
    for (std::size_t j = 0; j < n; ++j) {
      const auto x = dataset.Row(j);
      pool.within[i * n + j] = WithinRadius(schema, center, x, e.radius);
      pool.agree[i * n + j] = e.Predict(x) == truth[j];
    }
  };

  if (policy == ExecPolicy::kSerial) {
    for (std::size_t i = 0; i < pool.candidates; ++i) fill(i);
    return pool;
  }
  std::exception_ptr failure;
  const long count = static_cast<long>(pool.candidates);
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < count; ++i) {
    try {
      fill(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(aggrex_pool_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return pool;
}

}  // namespace

CandidatePool CandidatePool::FromMatrices(
    const std::vector<std::vector<bool>>& within,
    const std::vector<std::vector<bool>>& agree) {
  if (within.size() != agree.size()) {
    throw Error("within and agree must have the same number of rows");
  }
  CandidatePool pool;
  pool.candidates = within.size();
  pool.points = within.empty() ? 0 : within.front().size();
  for (std::size_t i = 0; i < within.size(); ++i) {
    if (within[i].size() != pool.points || agree[i].size() != pool.points) {
      throw Error("ragged candidate pool matrix at row " + std::to_string(i));
    }
    pool.centers.push_back(i);
    pool.radii.push_back(0.0);
    for (std::size_t j = 0; j < pool.points; ++j) {
      pool.within.push_back(within[i][j]);
      pool.agree.push_back(agree[i][j]);
    }
  }
  return pool;
}

CandidatePool BuildPoolSerial(const Dataset& dataset,
                              std::span<const LocalExplainer> explainers,
                              const BlackBoxModel& model) {
  return BuildPool(dataset, explainers, model, ExecPolicy::kSerial);
}

CandidatePool BuildPoolParallel(const Dataset& dataset,
                                std::span<const LocalExplainer> explainers,
                                const BlackBoxModel& model) {
  return BuildPool(dataset, explainers, model, ExecPolicy::kParallel);
}

std::string StatusName(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal:
      return "optimal";
    case SolveStatus::kFeasible:
      return "feasible";
    case SolveStatus::kInfeasible:
      return "infeasible";
  }
  return "unknown";
}

int Coverage(std::span<const int> selected, const CandidatePool& pool) {
  int covered = 0;
  for (std::size_t j = 0; j < pool.points; ++j) {
    for (int i : selected) {
      if (pool.Within(i, j)) {
        ++covered;
        break;
      }
    }
  }
  return covered;
}

double Fidelity(std::span<const int> selected, const CandidatePool& pool) {
  if (selected.empty()) throw Error("fidelity undefined for empty aggregate");
  double worst = 1.0;
  for (int i : selected) {
    int in_ball = 0;
    int agreeing = 0;
    for (std::size_t j = 0; j < pool.points; ++j) {
      if (!pool.Within(i, j)) continue;
      ++in_ball;
      agreeing += pool.Agrees(i, j);
    }
    if (in_ball > 0) {
      worst = std::min(worst, static_cast<double>(agreeing) / in_ball);
    }
  }
  return worst;
}

void FinishSolution(const CandidatePool& pool, AggregateSolution& solution) {
  std::vector<char> covered(pool.points, 0);
  for (const auto& claim : solution.claims) {
    for (int j : claim) covered[j] = 1;
  }
  solution.covered.clear();
  for (std::size_t j = 0; j < pool.points; ++j) {
    if (covered[j]) solution.covered.push_back(static_cast<int>(j));
  }
  solution.ip_coverage = static_cast<int>(solution.covered.size());
  solution.ball_coverage = Coverage(solution.selected, pool);
  solution.ball_min_fidelity.reset();
  solution.claimed_min_fidelity.reset();
  if (solution.selected.empty()) return;
  solution.ball_min_fidelity = Fidelity(solution.selected, pool);
  double worst = 1.0;
  for (std::size_t k = 0; k < solution.selected.size(); ++k) {
    const auto& claim = solution.claims[k];
    if (claim.empty()) continue;
    int agreeing = 0;
    for (int j : claim) agreeing += pool.Agrees(solution.selected[k], j);
    worst = std::min(worst, static_cast<double>(agreeing) / claim.size());
  }
  solution.claimed_min_fidelity = worst;
}

std::string IpVariable::Name() const {
  switch (family) {
    case VarFamily::kW:
      return "w_" + std::to_string(i);
    case VarFamily::kY:
      return "y_" + std::to_string(j);
    case VarFamily::kZ:
      return "z_" + std::to_string(i) + "_" + std::to_string(j);
  }
  return "?";
}

std::size_t IpModel::CountRows(RowFamily family) const {
  return std::count_if(rows.begin(), rows.end(),
                       [&](const IpRow& r) { return r.family == family; });
}

std::size_t IpModel::CountVariables(VarFamily family) const {
  return std::count_if(variables.begin(), variables.end(),
                       [&](const IpVariable& v) { return v.family == family; });
}

IpModel BuildIp(const CandidatePool& pool, int budget, double fidelity_floor) {
  CheckArguments(pool, budget, fidelity_floor);
  IpModel model;
  model.candidates = pool.candidates;
  model.points = pool.points;
  model.budget = budget;
  model.fidelity_floor = fidelity_floor;
  for (std::size_t i = 0; i < pool.candidates; ++i) {
    model.variables.push_back({VarFamily::kW, static_cast<int>(i), -1});
  }
  for (std::size_t j = 0; j < pool.points; ++j) {
    model.variables.push_back({VarFamily::kY, -1, static_cast<int>(j)});
    model.objective.push_back(model.YVar(j));
  }
  model.z_index.assign(pool.candidates * pool.points, -1);
  for (std::size_t i = 0; i < pool.candidates; ++i) {
    for (std::size_t j = 0; j < pool.points; ++j) {
      if (!pool.Within(i, j)) continue;
      model.z_index[i * pool.points + j] =
          static_cast<int>(model.variables.size());
      model.variables.push_back(
          {VarFamily::kZ, static_cast<int>(i), static_cast<int>(j)});
    }
  }

  auto suffix = [](std::size_t i, std::size_t j) {
    return std::to_string(i) + "_" + std::to_string(j);
  };
  for (std::size_t i = 0; i < pool.candidates; ++i) {
    for (std::size_t j = 0; j < pool.points; ++j) {
      const int z = model.ZVar(i, j);
      if (z < 0) continue;
      model.rows.push_back({RowFamily::kLink,
                            "link_" + suffix(i, j),
                            {{z, 1.0}, {model.WVar(i), -1.0}},
                            RowSense::kLessEqual,
                            0.0});
    }
  }
  for (std::size_t i = 0; i < pool.candidates; ++i) {
    for (std::size_t j = 0; j < pool.points; ++j) {
      const int z = model.ZVar(i, j);
      if (z < 0) continue;
      model.rows.push_back({RowFamily::kCover,
                            "cover_" + suffix(i, j),
                            {{model.YVar(j), 1.0}, {z, -1.0}},
                            RowSense::kGreaterEqual,
                            0.0});
    }
  }
  for (std::size_t j = 0; j < pool.points; ++j) {
    IpRow row{RowFamily::kAny,
              "any_" + std::to_string(j),
              {{model.YVar(j), 1.0}},
              RowSense::kLessEqual,
              0.0};
    for (std::size_t i = 0; i < pool.candidates; ++i) {
      const int z = model.ZVar(i, j);
      if (z >= 0) row.terms.push_back({z, -1.0});
    }
    model.rows.push_back(std::move(row));
  }
  for (std::size_t i = 0; i < pool.candidates; ++i) {
    IpRow row{RowFamily::kFidelity,
              "fid_" + std::to_string(i),
              {},
              RowSense::kGreaterEqual,
              0.0};
    for (std::size_t j = 0; j < pool.points; ++j) {
      const int z = model.ZVar(i, j);
      if (z < 0) continue;
      const double a = pool.Agrees(i, j) ? 1.0 : 0.0;
      row.terms.push_back({z, a - fidelity_floor});
    }
    model.rows.push_back(std::move(row));
  }
  IpRow budget_row{RowFamily::kBudget,
                   "budget",
                   {},
                   RowSense::kLessEqual,
                   static_cast<double>(budget)};
  for (std::size_t i = 0; i < pool.candidates; ++i) {
    budget_row.terms.push_back({model.WVar(i), 1.0});
  }
  model.rows.push_back(std::move(budget_row));
  return model;
}

AggregateSolution SolveExact(const IpModel& model, const CandidatePool& pool,
                             const SolverOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  CheckArguments(pool, model.budget, model.fidelity_floor);
  if (model.candidates != pool.candidates || model.points != pool.points) {
    throw Error("model was built for a different candidate pool");
  }
  ClaimSolver solver(pool, model.fidelity_floor);
  std::uint64_t evaluations = 0;
  const std::vector<int> greedy =
      GreedySelect(solver, pool.candidates, model.budget, &evaluations);
  const int greedy_value = solver.Solve(greedy, nullptr);

  BranchAndBound search(pool, solver, model.budget, greedy_value - 1,
                        options.node_limit);
  search.Run();

  AggregateSolution solution;
  std::vector<int> chosen = search.best();
  int value = search.best_value();
  if (value < greedy_value) {
    chosen = greedy;
    value = greedy_value;
  }
  // Drop candidates that add nothing, lowest index first.
  for (std::size_t k = 0; k < chosen.size();) {
    std::vector<int> without = chosen;
    without.erase(without.begin() + k);
    if (solver.Solve(without, nullptr) == value) {
      chosen = std::move(without);
    } else {
      ++k;
    }
  }
  solution.selected = chosen;
  solver.Solve(chosen, &solution.claims);
  FinishSolution(pool, solution);
  solution.status =
      search.truncated() ? SolveStatus::kFeasible : SolveStatus::kOptimal;
  solution.nodes_explored = search.nodes();
  solution.wall_time_ms = ElapsedMs(start);
  return solution;
}

AggregateSolution SolveGreedy(const CandidatePool& pool, int budget,
                              double fidelity_floor) {
  const auto start = std::chrono::steady_clock::now();
  CheckArguments(pool, budget, fidelity_floor);
  ClaimSolver solver(pool, fidelity_floor);
  AggregateSolution solution;
  solution.selected =
      GreedySelect(solver, pool.candidates, budget, &solution.nodes_explored);
  solver.Solve(solution.selected, &solution.claims);
  FinishSolution(pool, solution);
  solution.status = SolveStatus::kFeasible;
  solution.wall_time_ms = ElapsedMs(start);
  return solution;
}

nlohmann::json SolutionToJson(const AggregateSolution& solution,
                              bool with_timing) {
  nlohmann::json json;
  json["selected"] = solution.selected;
  nlohmann::json claims = nlohmann::json::array();
  for (std::size_t k = 0; k < solution.selected.size(); ++k) {
    claims.push_back(
        {{"candidate", solution.selected[k]}, {"points", solution.claims[k]}});
  }
  json["z_assignment"] = std::move(claims);
  json["covered"] = solution.covered;
  json["ip_coverage"] = solution.ip_coverage;
  json["ball_coverage"] = solution.ball_coverage;
  json["ball_min_fidelity"] = solution.ball_min_fidelity
                                  ? nlohmann::json(*solution.ball_min_fidelity)
                                  : nlohmann::json(nullptr);
  json["claimed_min_fidelity"] =
      solution.claimed_min_fidelity
          ? nlohmann::json(*solution.claimed_min_fidelity)
          : nlohmann::json(nullptr);
  json["status"] = StatusName(solution.status);
  json["nodes_explored"] = solution.nodes_explored;
  json["wall_time_ms"] = with_timing ? nlohmann::json(solution.wall_time_ms)
                                     : nlohmann::json(nullptr);
  return json;
}

}  // namespace aggrex
