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
#include <string>
#include <vector>

#include "aggrex/blackbox.h"
#include "aggrex/error.h"
#include "aggrex/explainer.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace aggrex {
namespace {

using testing::OraclePool;
using testing::RandomPool;

using BoolMatrix = std::vector<std::vector<bool>>;

BoolMatrix BallRows(std::size_t n, const std::vector<std::vector<int>>& balls) {
  BoolMatrix m(balls.size(), std::vector<bool>(n, false));
  for (std::size_t i = 0; i < balls.size(); ++i) {
    for (int j : balls[i]) m[i][j] = true;
  }
  return m;
}

BoolMatrix AllTrue(std::size_t rows, std::size_t cols) {
  return BoolMatrix(rows, std::vector<bool>(cols, true));
}

void ExpectValid(const CandidatePool& pool, int k, double phi,
                 const AggregateSolution& s) {
  const auto issues = VerifySolution(pool, k, phi, s);
  EXPECT_TRUE(issues.empty()) << issues.front();
}

// Independent max coverage over full balls.
int BestBallCoverage(const CandidatePool& pool, int k) {
  int best = 0;
  for (std::uint32_t mask = 0; mask < (1u << pool.candidates); ++mask) {
    if (std::popcount(mask) > k) continue;
    std::vector<int> chosen;
    for (std::size_t i = 0; i < pool.candidates; ++i) {
      if (mask >> i & 1) chosen.push_back(static_cast<int>(i));
    }
    best = std::max(best, Coverage(chosen, pool));
  }
  return best;
}

LocalExplainer ConstantExplainer(std::size_t center, std::vector<double> x,
                                 double radius, int label) {
  LocalExplainer e;
  e.center_index = center;
  e.center = std::move(x);
  e.radius = radius;
  e.tree = DecisionTree::Leaf(label);
  return e;
}

Dataset LineDataset() {
  Matrix x(5, 1);
  for (std::size_t i = 0; i < 5; ++i) x(i, 0) = static_cast<double>(i);
  return Dataset(FeatureSchema::Make(1, 0), x, {0, 0, 0, 0, 0});
}

BlackBoxModel ConstantModel(const Dataset& d, int label) {
  std::vector<std::pair<std::vector<double>, int>> pairs;
  for (std::size_t i = 0; i < d.rows(); ++i) {
    pairs.emplace_back(std::vector<double>(d.Row(i).begin(), d.Row(i).end()),
                       label);
  }
  return MakeTableOracle(d.schema(), pairs);
}

TEST(BuildPoolTest, ZeroRadiusGivesIdentity) {
  const Dataset d = LineDataset();
  const BlackBoxModel f = ConstantModel(d, 0);
  std::vector<LocalExplainer> explainers;
  for (std::size_t i = 0; i < 5; ++i) {
    explainers.push_back(ConstantExplainer(i, {double(i)}, 0.0, 0));
  }
  const CandidatePool pool = BuildPoolSerial(d, explainers, f);
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = 0; j < 5; ++j) {
      EXPECT_EQ(pool.Within(i, j), i == j);
      EXPECT_TRUE(pool.Agrees(i, j));
    }
  }
}

TEST(BuildPoolTest, LineInstanceMatchesHandDistances) {
  const Dataset d = LineDataset();
  const BlackBoxModel f = ConstantModel(d, 0);
  std::vector<LocalExplainer> explainers;
  for (std::size_t i = 0; i < 5; ++i) {
    // Explainers at centers 0 and 4 disagree with f everywhere.
    explainers.push_back(
        ConstantExplainer(i, {double(i)}, 1.5, (i == 0 || i == 4) ? 1 : 0));
  }
  const CandidatePool pool = BuildPoolSerial(d, explainers, f);
  const bool expected[5][5] = {{1, 1, 0, 0, 0},
                               {1, 1, 1, 0, 0},
                               {0, 1, 1, 1, 0},
                               {0, 0, 1, 1, 1},
                               {0, 0, 0, 1, 1}};
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = 0; j < 5; ++j) {
      EXPECT_EQ(pool.Within(i, j), expected[i][j]) << i << "," << j;
      EXPECT_EQ(pool.Agrees(i, j), i != 0 && i != 4);
    }
  }
  EXPECT_EQ(pool.centers, (std::vector<std::size_t>{0, 1, 2, 3, 4}));
}

TEST(BuildPoolTest, SchemaMismatchIsAnError) {
  const Dataset d = LineDataset();
  const BlackBoxModel f = ConstantModel(d, 0);
  std::vector<LocalExplainer> wide = {ConstantExplainer(0, {0.0, 0.0}, 1, 0)};
  EXPECT_THROW(BuildPoolSerial(d, wide, f), SchemaError);
  std::vector<LocalExplainer> outside = {ConstantExplainer(7, {0.0}, 1, 0)};
  EXPECT_THROW(BuildPoolSerial(d, outside, f), SchemaError);
}

TEST(BuildPoolTest, ParallelMatchesSerial) {
  SynthSpec spec;
  spec.n = 40;
  spec.seed = 5;
  const Dataset d = SynthMulticlass(spec);
  const BlackBoxModel f = TrainBaggedForest(d, 5, 3);
  ExplainJob job;
  job.radii = {2.0};
  job.params.samples = 300;
  const auto explainers = TrainExplainersSerial(f, d, job);
  const CandidatePool a = BuildPoolSerial(d, explainers, f);
  const CandidatePool b = BuildPoolParallel(d, explainers, f);
  EXPECT_EQ(a.within, b.within);
  EXPECT_EQ(a.agree, b.agree);
  for (std::size_t i = 0; i < a.candidates; ++i) {
    EXPECT_TRUE(a.Within(i, a.centers[i]));
  }
}

TEST(CoverageTest, Examples) {
  const CandidatePool pool = CandidatePool::FromMatrices(
      BallRows(5, {{1, 2, 3}, {3, 4}, {0, 1, 2, 3, 4}}), AllTrue(3, 5));
  EXPECT_EQ(Coverage(std::vector<int>{}, pool), 0);
  EXPECT_EQ(Coverage(std::vector<int>{2}, pool), 5);
  EXPECT_EQ(Coverage(std::vector<int>{0, 1}, pool), 4);
}

TEST(FidelityTest, Examples) {
  // Candidate 0: ball of 4, 3 agreeing. Candidate 1: ball of 5, 4 agreeing.
  // Candidate 2: ball of 5, 3 agreeing.
  const CandidatePool pool = CandidatePool::FromMatrices(
      BallRows(5, {{0, 1, 2, 3}, {0, 1, 2, 3, 4}, {0, 1, 2, 3, 4}}),
      BallRows(5, {{0, 1, 2}, {0, 1, 2, 3}, {0, 1, 2}}));
  EXPECT_DOUBLE_EQ(Fidelity(std::vector<int>{0}, pool), 0.75);
  EXPECT_DOUBLE_EQ(Fidelity(std::vector<int>{1, 2}, pool), 0.6);
  const CandidatePool agreeing =
      CandidatePool::FromMatrices(AllTrue(2, 3), AllTrue(2, 3));
  EXPECT_DOUBLE_EQ(Fidelity(std::vector<int>{0, 1}, agreeing), 1.0);
}

TEST(FidelityTest, EmptySelectionIsAnError) {
  const CandidatePool pool =
      CandidatePool::FromMatrices(AllTrue(1, 1), AllTrue(1, 1));
  try {
    Fidelity(std::vector<int>{}, pool);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "fidelity undefined for empty aggregate");
  }
}

TEST(FidelityTest, EmptyBallCountsAsOne) {
  const CandidatePool pool = CandidatePool::FromMatrices(
      BallRows(2, {{}, {0, 1}}), BallRows(2, {{}, {0}}));
  EXPECT_DOUBLE_EQ(Fidelity(std::vector<int>{0}, pool), 1.0);
  EXPECT_DOUBLE_EQ(Fidelity(std::vector<int>{0, 1}, pool), 0.5);
}

TEST(BuildIpTest, TwoPointCounts) {
  const CandidatePool pool =
      CandidatePool::FromMatrices(AllTrue(2, 2), BallRows(2, {{0}, {1}}));
  const IpModel m = BuildIp(pool, 1, 0.5);
  EXPECT_EQ(m.CountVariables(VarFamily::kW), 2u);
  EXPECT_EQ(m.CountVariables(VarFamily::kY), 2u);
  EXPECT_EQ(m.CountVariables(VarFamily::kZ), 4u);
  EXPECT_EQ(m.CountRows(RowFamily::kLink), 4u);
  EXPECT_EQ(m.CountRows(RowFamily::kCover), 4u);
  EXPECT_EQ(m.CountRows(RowFamily::kAny), 2u);
  EXPECT_EQ(m.CountRows(RowFamily::kFidelity), 2u);
  EXPECT_EQ(m.CountRows(RowFamily::kBudget), 1u);
  EXPECT_EQ(m.rows.size(), 13u);
  EXPECT_EQ(m.rows.back().rhs, 1.0);
}

TEST(BuildIpTest, FidelityCoefficients) {
  const CandidatePool pool =
      CandidatePool::FromMatrices(AllTrue(2, 2), BallRows(2, {{0}, {1}}));
  for (const IpRow& row : BuildIp(pool, 1, 0.0).rows) {
    if (row.family != RowFamily::kFidelity) continue;
    for (const IpTerm& t : row.terms) EXPECT_GE(t.coef, 0.0);
  }
  const IpModel m = BuildIp(pool, 1, 0.7);
  for (const IpRow& row : m.rows) {
    if (row.family != RowFamily::kFidelity) continue;
    for (const IpTerm& t : row.terms) {
      const IpVariable& v = m.variables[t.var];
      EXPECT_DOUBLE_EQ(t.coef, (pool.Agrees(v.i, v.j) ? 1.0 : 0.0) - 0.7);
    }
  }
}

TEST(BuildIpTest, IdentityPresolvesOffDiagonal) {
  const CandidatePool pool =
      CandidatePool::FromMatrices(BallRows(3, {{0}, {1}, {2}}), AllTrue(3, 3));
  const IpModel m = BuildIp(pool, 2, 0.5);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(m.ZVar(i, j) >= 0, i == j);
  }
  EXPECT_EQ(m.CountVariables(VarFamily::kZ), 3u);
}

TEST(BuildIpTest, RejectsBadArguments) {
  const CandidatePool pool =
      CandidatePool::FromMatrices(AllTrue(1, 1), AllTrue(1, 1));
  EXPECT_THROW(BuildIp(pool, -1, 0.5), Error);
  EXPECT_THROW(BuildIp(pool, 1, 1.5), Error);
  EXPECT_THROW(BuildIp(pool, 1, -0.1), Error);
}

TEST(SolveExactTest, ZeroBudget) {
  const CandidatePool pool = RandomPool(1, 6, 0.4, 0.8);
  const AggregateSolution s = SolveExact(BuildIp(pool, 0, 0.5), pool);
  EXPECT_TRUE(s.selected.empty());
  EXPECT_EQ(s.ip_coverage, 0);
  EXPECT_EQ(s.status, SolveStatus::kOptimal);
}

TEST(SolveExactTest, ThreeBallsPicksFirstPair) {
  const CandidatePool pool = CandidatePool::FromMatrices(
      BallRows(3, {{0, 1}, {1, 2}, {2}}), AllTrue(3, 3));
  const AggregateSolution s = SolveExact(BuildIp(pool, 1, 0.0), pool);
  EXPECT_EQ(s.ip_coverage, 2);
  EXPECT_EQ(s.selected, std::vector<int>{0});
  EXPECT_EQ(BruteForce(pool, 1, 0.0).ip_coverage, 2);
  ExpectValid(pool, 1, 0.0, s);
}

TEST(SolveExactTest, ClaimsDisagreeingPointWhenSlackAllows) {
  // Candidate 0 holds points 0..2 and agrees at 0 and 1.
  const CandidatePool pool = CandidatePool::FromMatrices(
      BallRows(3, {{0, 1, 2}, {1}, {2}}), BallRows(3, {{0, 1}, {1}, {2}}));
  const AggregateSolution s = SolveExact(BuildIp(pool, 1, 0.5), pool);
  EXPECT_EQ(s.ip_coverage, 3);
  EXPECT_EQ(s.selected, std::vector<int>{0});
  EXPECT_EQ(s.claims, (std::vector<std::vector<int>>{{0, 1, 2}}));
  ExpectValid(pool, 1, 0.5, s);

  // At 0.7 the slack 2 * 0.3 cannot pay for a disagreeing claim.
  const AggregateSolution tight = SolveExact(BuildIp(pool, 1, 0.7), pool);
  EXPECT_EQ(tight.ip_coverage, 2);
  EXPECT_EQ(tight.ball_coverage, 3);
  EXPECT_DOUBLE_EQ(*tight.claimed_min_fidelity, 1.0);
  EXPECT_NEAR(*tight.ball_min_fidelity, 2.0 / 3.0, 1e-15);
  ExpectValid(pool, 1, 0.7, tight);
}

TEST(SolveExactTest, NodeLimitDowngradesStatus) {
  const CandidatePool pool = RandomPool(3, 30, 0.15, 0.8);
  SolverOptions options;
  options.node_limit = 5;
  const AggregateSolution s = SolveExact(BuildIp(pool, 4, 0.7), pool, options);
  EXPECT_EQ(s.status, SolveStatus::kFeasible);
  EXPECT_LE(s.nodes_explored, 5u);
  ExpectValid(pool, 4, 0.7, s);
  EXPECT_GE(s.ip_coverage, SolveGreedy(pool, 4, 0.7).ip_coverage);
}

TEST(SolveExactTest, Deterministic) {
  const CandidatePool pool = RandomPool(8, 20, 0.2, 0.7);
  const AggregateSolution a = SolveExact(BuildIp(pool, 3, 0.7), pool);
  const AggregateSolution b = SolveExact(BuildIp(pool, 3, 0.7), pool);
  EXPECT_EQ(a.selected, b.selected);
  EXPECT_EQ(a.claims, b.claims);
  EXPECT_EQ(a.nodes_explored, b.nodes_explored);
}

TEST(SolveGreedyTest, ZeroBudgetAndStatus) {
  const CandidatePool pool = RandomPool(2, 5, 0.4, 0.8);
  const AggregateSolution s = SolveGreedy(pool, 0, 0.5);
  EXPECT_TRUE(s.selected.empty());
  EXPECT_EQ(SolveGreedy(pool, 2, 0.5).status, SolveStatus::kFeasible);
}

TEST(SolveGreedyTest, DisjointBallsMatchExact) {
  const CandidatePool pool = CandidatePool::FromMatrices(
      BallRows(6, {{0, 1, 2}, {1}, {2}, {3, 4}, {4}, {5}}), AllTrue(6, 6));
  for (int k = 0; k <= 4; ++k) {
    EXPECT_EQ(SolveGreedy(pool, k, 0.5).ip_coverage,
              SolveExact(BuildIp(pool, k, 0.5), pool).ip_coverage);
  }
}

TEST(SolveGreedyTest, ClassicOverlapIsSuboptimal) {
  // Greedy takes the 4-point ball 2 first and then gains one point per pick;
  // balls 0 and 3 together cover all six.
  const CandidatePool pool = CandidatePool::FromMatrices(
      BallRows(6, {{0, 1, 2}, {1}, {1, 2, 3, 4}, {3, 4, 5}, {4}, {5}}),
      AllTrue(6, 6));
  const AggregateSolution greedy = SolveGreedy(pool, 2, 0.5);
  const AggregateSolution exact = SolveExact(BuildIp(pool, 2, 0.5), pool);
  EXPECT_EQ(greedy.ip_coverage, 5);
  EXPECT_EQ(exact.ip_coverage, 6);
  EXPECT_EQ(exact.selected, (std::vector<int>{0, 3}));
  ExpectValid(pool, 2, 0.5, greedy);
  ExpectValid(pool, 2, 0.5, exact);
}

TEST(BruteForceTest, SinglePoint) {
  const CandidatePool pool =
      CandidatePool::FromMatrices(AllTrue(1, 1), AllTrue(1, 1));
  EXPECT_EQ(BruteForce(pool, 1, 0.9).ip_coverage, 1);
}

TEST(BruteForceTest, RefusesLargeInstances) {
  EXPECT_THROW(BruteForce(RandomPool(1, 13, 0.1, 1.0), 2, 0.5), Error);
  // 5 x 5 all within, all disagreeing: 25 pairs.
  const CandidatePool pool = CandidatePool::FromMatrices(
      AllTrue(5, 5), BoolMatrix(5, std::vector<bool>(5, false)));
  EXPECT_THROW(BruteForce(pool, 2, 0.5), Error);
}

TEST(BruteForceTest, FloorOneClaimsOnlyAgreeingPoints) {
  const CandidatePool pool = RandomPool(4, 8, 0.5, 0.6, 20);
  for (const AggregateSolution& s :
       {BruteForce(pool, 3, 1.0), SolveExact(BuildIp(pool, 3, 1.0), pool)}) {
    for (std::size_t k = 0; k < s.selected.size(); ++k) {
      for (int j : s.claims[k]) EXPECT_TRUE(pool.Agrees(s.selected[k], j));
    }
    ExpectValid(pool, 3, 1.0, s);
  }
}

TEST(SolverPropertyTest, ExactMatchesBruteForce) {
  const double floors[] = {0.0, 0.5, 0.7, 0.9};
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const CandidatePool pool = OraclePool(seed);
    const int k = static_cast<int>(seed % 4);
    const double phi = floors[(seed / 4) % 4];
    const AggregateSolution exact = SolveExact(BuildIp(pool, k, phi), pool);
    const AggregateSolution brute = BruteForce(pool, k, phi);
    ASSERT_EQ(exact.ip_coverage, brute.ip_coverage) << "seed " << seed;
    EXPECT_EQ(exact.status, SolveStatus::kOptimal);
    ExpectValid(pool, k, phi, exact);
    ExpectValid(pool, k, phi, brute);
  }
}

TEST(SolverPropertyTest, FloorZeroIsBallMaxCoverage) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const CandidatePool pool = RandomPool(seed, 9, 0.3, 0.5);
    for (int k = 1; k <= 3; ++k) {
      EXPECT_EQ(SolveExact(BuildIp(pool, k, 0.0), pool).ip_coverage,
                BestBallCoverage(pool, k));
    }
  }
}

TEST(SolverPropertyTest, MonotoneAndDominatesGreedy) {
  const double floors[] = {0.0, 0.5, 0.7, 0.9, 1.0};
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const CandidatePool pool = RandomPool(1000 + seed, 14, 0.2, 0.75);
    std::vector<std::vector<int>> value(5, std::vector<int>(5));
    for (int f = 0; f < 5; ++f) {
      for (int k = 0; k < 5; ++k) {
        const AggregateSolution exact =
            SolveExact(BuildIp(pool, k, floors[f]), pool);
        const AggregateSolution greedy = SolveGreedy(pool, k, floors[f]);
        ExpectValid(pool, k, floors[f], exact);
        ExpectValid(pool, k, floors[f], greedy);
        EXPECT_GE(exact.ip_coverage, greedy.ip_coverage);
        EXPECT_GE(exact.ball_coverage, exact.ip_coverage);
        EXPECT_GE(greedy.ball_coverage, greedy.ip_coverage);
        EXPECT_LE(static_cast<int>(exact.selected.size()), k);
        value[f][k] = exact.ip_coverage;
      }
    }
    for (int f = 0; f < 5; ++f) {
      for (int k = 1; k < 5; ++k) EXPECT_GE(value[f][k], value[f][k - 1]);
    }
    for (int k = 0; k < 5; ++k) {
      for (int f = 1; f < 5; ++f) EXPECT_LE(value[f][k], value[f - 1][k]);
    }
  }
}

TEST(SolverPropertyTest, FullBallsPassingFloorMeetFidelity) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const CandidatePool pool = RandomPool(500 + seed, 10, 0.3, 0.85);
    const double phi = 0.7;
    const AggregateSolution s = SolveExact(BuildIp(pool, 3, phi), pool);
    bool all_pass = !s.selected.empty();
    for (int i : s.selected) {
      all_pass = all_pass && Fidelity(std::vector<int>{i}, pool) >= phi;
    }
    if (all_pass) {
      EXPECT_GE(*s.ball_min_fidelity, phi);
    }
    if (!s.selected.empty()) {
      EXPECT_GE(*s.claimed_min_fidelity, phi - 1e-12);
    }
  }
}

TEST(VerifyTest, CatchesTamperedSolutions) {
  const CandidatePool pool = CandidatePool::FromMatrices(
      BallRows(3, {{0, 1}, {1, 2}, {2}}), BallRows(3, {{0}, {1, 2}, {2}}));
  const AggregateSolution good = SolveExact(BuildIp(pool, 1, 0.9), pool);
  ASSERT_TRUE(VerifySolution(pool, 1, 0.9, good).empty());

  AggregateSolution outside = good;
  outside.claims[0].push_back(0);
  std::sort(outside.claims[0].begin(), outside.claims[0].end());
  FinishSolution(pool, outside);
  EXPECT_FALSE(VerifySolution(pool, 1, 0.9, outside).empty());

  AggregateSolution over_budget = good;
  over_budget.selected = {0, 1};
  over_budget.claims = {{0}, {1, 2}};
  FinishSolution(pool, over_budget);
  EXPECT_FALSE(VerifySolution(pool, 1, 0.9, over_budget).empty());
  EXPECT_TRUE(VerifySolution(pool, 2, 0.9, over_budget).empty());

  AggregateSolution unfaithful;
  unfaithful.selected = {0};
  unfaithful.claims = {{0, 1}};
  FinishSolution(pool, unfaithful);
  EXPECT_FALSE(VerifySolution(pool, 1, 0.9, unfaithful).empty());
  EXPECT_TRUE(VerifySolution(pool, 1, 0.5, unfaithful).empty());

  AggregateSolution miscounted = good;
  miscounted.ip_coverage += 1;
  EXPECT_FALSE(VerifySolution(pool, 1, 0.9, miscounted).empty());

  AggregateSolution uncovered = good;
  uncovered.covered.clear();
  EXPECT_FALSE(VerifySolution(pool, 1, 0.9, uncovered).empty());
}

TEST(SolutionJsonTest, Fields) {
  const CandidatePool pool = RandomPool(6, 6, 0.4, 0.8);
  const AggregateSolution s = SolveExact(BuildIp(pool, 2, 0.5), pool);
  const nlohmann::json j = SolutionToJson(s, false);
  for (const char* key :
       {"selected", "z_assignment", "ip_coverage", "ball_coverage",
        "ball_min_fidelity", "status", "nodes_explored", "wall_time_ms"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_TRUE(j["wall_time_ms"].is_null());
  EXPECT_EQ(j["status"], "optimal");
  EXPECT_TRUE(SolutionToJson(s, true)["wall_time_ms"].is_number());
  EXPECT_EQ(j["z_assignment"].size(), s.selected.size());
}

}  // namespace
}  // namespace aggrex
