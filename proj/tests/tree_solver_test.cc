// Copyright 2026 The dpufl Authors.
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

#include "dpufl/tree_solver.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "dpufl/oracle.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace dpufl {
namespace {

using ::dpufl::testing::kWFacilityCost;
using ::dpufl::testing::kWRoot;
using ::dpufl::testing::kWU2;
using ::dpufl::testing::kWV1;
using ::dpufl::testing::kWV3;
using ::dpufl::testing::RandomTreeCase;
using ::dpufl::testing::WorkedClients;
using ::dpufl::testing::WorkedTree;
using ::testing::ElementsAre;
using ::testing::IsEmpty;

SolverParams ParamsP() { return *SolverParams::Create(1, 10, 1.96); }

// A single chain of `depth` edges above one leaf.
HstTree Chain(int depth, double lambda) {
  std::vector<HstVertex> vertices;
  for (int l = depth; l >= 0; --l) {
    vertices.push_back({l, l == depth ? -1 : depth - l - 1, l == 0 ? 0 : -1});
  }
  return *HstTree::Create(lambda, depth, vertices);
}

TEST(ComputeLPrimeTest, Examples) {
  EXPECT_EQ(ComputeLPrime(1, 1, 1.5), 0);
  EXPECT_EQ(ComputeLPrime(4, 0.5, 1.5), 2);
  EXPECT_EQ(ComputeLPrime(10, 0.01, 1.5), 0);
  // Exact boundary: 1.5^2 = 2.25.
  EXPECT_EQ(ComputeLPrime(2.25, 1, 1.5), 2);
  EXPECT_EQ(ComputeLPrime(10, 1, 1.96), 4);
}

TEST(ComputeLPrimeTest, BoundaryProperty) {
  for (double lambda : {1.2, 1.5, 1.96, 2.0}) {
    for (double ef : {0.3, 1.0, 1.7, 10.0, 333.0, 1000.0}) {
      const int l = ComputeLPrime(ef, 1, lambda);
      EXPECT_GE(std::pow(lambda, l), ef * (1 - 1e-12));
      if (l > 0) EXPECT_LT(std::pow(lambda, l - 1), ef);
    }
  }
}

TEST(SolverParamsTest, ParamsP) {
  const SolverParams p = ParamsP();
  EXPECT_NEAR(p.eta, 1.4, 1e-15);
  EXPECT_NEAR(p.c, 0.4 / 1.96, 1e-15);
  EXPECT_EQ(p.l_prime, 4);
  EXPECT_GT(p.c, 0);
  EXPECT_LT(p.c, 1);
}

TEST(SolverParamsTest, Validation) {
  EXPECT_FALSE(SolverParams::Create(0, 1, 1.5).ok());
  EXPECT_FALSE(SolverParams::Create(1, 0, 1.5).ok());
  EXPECT_FALSE(SolverParams::Create(1, 1, 1.0).ok());
  EXPECT_FALSE(SolverParams::Create(1, 1, 2.5).ok());
  EXPECT_TRUE(SolverParams::Create(1, 1, 2.0).ok());
}

TEST(LaplaceScaleTest, ParamsP) {
  const SolverParams p = ParamsP();
  EXPECT_NEAR(*LaplaceScale(0, p), 10 / (p.c * 3.8416), 1e-12);
  EXPECT_NEAR(*LaplaceScale(0, p), 12.755, 1e-3);
  EXPECT_NEAR(*LaplaceScale(3, p), 4.648, 1e-3);
  EXPECT_FALSE(LaplaceScale(4, p).ok());
  for (int l = 1; l < 4; ++l) {
    EXPECT_GT(*LaplaceScale(l - 1, p), *LaplaceScale(l, p));
  }
}

TEST(LaplaceTest, InverseCdf) {
  EXPECT_EQ(LaplaceFromUniform(2, 0), 0);
  EXPECT_EQ(LaplaceFromUniform(2, 0.25), -LaplaceFromUniform(2, -0.25));
  // u = 1/4 is the 3/4 quantile: b ln 2.
  EXPECT_NEAR(LaplaceFromUniform(2, 0.25), 2 * std::log(2.0), 1e-15);
}

TEST(LaplaceTest, MeanAbsoluteValue) {
  Rng rng(17);
  const double b = 3;
  const int samples = 1000000;
  double sum_abs = 0;
  double sum = 0;
  for (int i = 0; i < samples; ++i) {
    const double x = SampleLaplace(b, rng);
    sum_abs += std::abs(x);
    sum += x;
  }
  EXPECT_NEAR(sum_abs / samples, b, 0.01 * b);
  EXPECT_NEAR(sum / samples, 0, 5 * b * std::sqrt(2.0 / samples));
}

TEST(MarkBaseTest, WorkedInstance) {
  const HstTree t = WorkedTree();
  const SolverParams p = *SolverParams::Create(1, kWFacilityCost, 1.5);
  ASSERT_EQ(p.l_prime, 2);
  const MarkedSet m = MarkBase(t, ComputeSubtreeCounts(t, WorkedClients()), p);
  EXPECT_THAT(m.Members(), ElementsAre(kWRoot, kWU2, kWV3));
  EXPECT_THAT(SelectSuperset(t, m), ElementsAre(kWV3));
}

TEST(MarkBaseTest, ZeroClientsMarksTopLevelsOnly) {
  const HstTree t = WorkedTree();
  const SolverParams p = *SolverParams::Create(1, kWFacilityCost, 1.5);
  const MarkedSet m =
      MarkBase(t, ComputeSubtreeCounts(t, std::vector<int64_t>(4, 0)), p);
  EXPECT_THAT(m.Members(), ElementsAre(kWRoot));
  EXPECT_THAT(SelectSuperset(t, m), ElementsAre(kWRoot));
}

TEST(MarkBaseTest, LPrimeZeroMarksEverything) {
  const HstTree t = WorkedTree();
  const SolverParams p = *SolverParams::Create(0.1, 1, 1.5);
  ASSERT_EQ(p.l_prime, 0);
  const SubtreeCounts counts = ComputeSubtreeCounts(t, WorkedClients());
  const MarkedSet m = MarkBase(t, counts, p);
  EXPECT_EQ(m.Members().size(), 7u);
  EXPECT_EQ(SelectSuperset(t, m), t.Leaves());
  Rng rng(1);
  EXPECT_EQ(MarkNoisy(t, counts, p, rng), m);
}

TEST(MarkBaseTest, UpwardClosedOnRandomTrees) {
  Rng rng(2);
  for (int i = 0; i < 200; ++i) {
    const auto c = RandomTreeCase(rng, 1.5, 12, 5);
    const SolverParams p = *SolverParams::Create(1, c.facility_cost, 1.5);
    const HstTree t = *PrepareTree(c.tree, p);
    const MarkedSet m = MarkBase(t, ComputeSubtreeCounts(t, c.clients), p);
    for (VertexId v = 0; v < t.num_vertices(); ++v) {
      if (m.marked[v] && t.parent(v) >= 0) {
        EXPECT_TRUE(m.marked[t.parent(v)]);
      }
      if (t.level(v) >= p.l_prime) EXPECT_TRUE(m.marked[v]);
    }
  }
}

TEST(MarkNoisyTest, DeterministicAndNoiseOnlyBelowLPrime) {
  const HstTree t = WorkedTree();
  const SolverParams p = *SolverParams::Create(1, kWFacilityCost, 1.5);
  const SubtreeCounts counts = ComputeSubtreeCounts(t, WorkedClients());
  Rng a(5);
  Rng b(5);
  const MarkedSet ma = MarkNoisy(t, counts, p, a);
  EXPECT_EQ(ma, MarkNoisy(t, counts, p, b));
  for (VertexId v = 0; v < t.num_vertices(); ++v) {
    EXPECT_EQ(ma.noisy_counts[v].has_value(), t.level(v) < p.l_prime);
  }
}

TEST(MarkNoisyTest, EmptyLeafMarkingFrequency) {
  const SolverParams p = ParamsP();
  const HstTree t = Chain(4, 1.96);
  const SubtreeCounts counts = ComputeSubtreeCounts(t, std::vector<int64_t>{0});
  const VertexId leaf = t.leaf(0);
  const int samples = 1000000;
  Rng rng(23);
  int hits = 0;
  for (int i = 0; i < samples; ++i) {
    hits += MarkNoisy(t, counts, p, rng).marked[leaf] ? 1 : 0;
  }
  const double expected = 0.5 * std::exp(-10 / *LaplaceScale(0, p));
  EXPECT_NEAR(expected, 0.2283, 1e-4);
  const double sigma = std::sqrt(expected * (1 - expected) / samples);
  EXPECT_NEAR(static_cast<double>(hits) / samples, expected, 3 * sigma);
}

TEST(ClosestFacilityRuleTest, WorkedInstance) {
  const HstTree t = WorkedTree();
  const Assignment a =
      *ClosestFacilityRule(t, WorkedClients(), std::vector<VertexId>{kWV3},
                           kWFacilityCost);
  EXPECT_THAT(a.open, ElementsAre(kWV3));
  EXPECT_THAT(a.serving, ElementsAre(kWV3, -1, kWV3, -1));
  EXPECT_EQ(a.cost, (CostBreakdown{2.25, 5, 7.25}));
}

TEST(ClosestFacilityRuleTest, AllLeaves) {
  const HstTree t = WorkedTree();
  const Assignment a =
      *ClosestFacilityRule(t, WorkedClients(), t.Leaves(), kWFacilityCost);
  EXPECT_THAT(a.open, ElementsAre(kWV1, kWV3));
  EXPECT_EQ(a.cost.connection, 0);
}

TEST(ClosestFacilityRuleTest, UnclaimedMemberStaysClosed) {
  const HstTree t = WorkedTree();
  const Assignment a = *ClosestFacilityRule(
      t, WorkedClients(), std::vector<VertexId>{kWV1, kWV3, 6},
      kWFacilityCost);
  EXPECT_THAT(a.open, ElementsAre(kWV1, kWV3));
}

TEST(ClosestFacilityRuleTest, MatchesBruteForce) {
  Rng rng(3);
  for (int i = 0; i < 300; ++i) {
    const auto c = RandomTreeCase(rng, 1.5, 10, 5);
    const HstTree& t = c.tree;
    std::vector<VertexId> r;
    for (VertexId v = 0; v < t.num_vertices(); ++v) {
      if (rng.Bernoulli(0.25)) r.push_back(v);
    }
    if (r.empty()) r.push_back(t.root());
    const Assignment a = *ClosestFacilityRule(t, c.clients, r, c.facility_cost);
    const DistanceFn d = PointToVertexDistance(t);
    std::vector<VertexId> open;
    double connection = 0;
    for (PointId p = 0; p < t.num_points(); ++p) {
      if (c.clients[p] == 0) {
        EXPECT_EQ(a.serving[p], -1);
        continue;
      }
      const VertexId s = *NearestInSet(d, p, r);
      EXPECT_EQ(a.serving[p], s);
      open.push_back(s);
      connection += static_cast<double>(c.clients[p]) * d(p, s);
    }
    std::sort(open.begin(), open.end());
    open.erase(std::unique(open.begin(), open.end()), open.end());
    EXPECT_EQ(a.open, open);
    EXPECT_DOUBLE_EQ(a.cost.connection, connection);
    // Connection against R equals connection against S.
    if (!open.empty()) {
      EXPECT_DOUBLE_EQ(
          EvalCost(c.clients, c.facility_cost, open, d)->connection,
          EvalCost(c.clients, c.facility_cost, r, d)->connection);
    }
  }
}

TEST(SolveTreeBaseTest, WorkedInstance) {
  const Solution s = *SolveTreeBase(WorkedTree(), WorkedClients(),
                                    kWFacilityCost, 1);
  EXPECT_THAT(s.superset, ElementsAre(kWV3));
  EXPECT_THAT(s.open, ElementsAre(kWV3));
  EXPECT_EQ(s.cost.total, 7.25);
  EXPECT_FALSE(s.seed.has_value());
  const double opt = 4.5;
  EXPECT_NEAR(s.cost.total / opt, 1.6111, 1e-4);
  EXPECT_LE(s.cost.total / opt, 1 + 1.0 + 2 * 1.5 / 0.5);
}

TEST(SolveTreeBaseTest, ZeroClients) {
  const Solution s = *SolveTreeBase(WorkedTree(), std::vector<int64_t>(4, 0),
                                    kWFacilityCost, 1);
  EXPECT_THAT(s.open, IsEmpty());
  EXPECT_EQ(s.cost.total, 0);
}

TEST(SolveTreeBaseTest, ExtendsShallowTrees) {
  const HstTree t = *HstTree::Create(1.5, 1, {{1, -1, -1}, {0, 0, 0}, {0, 0, 1}});
  // epsilon f = 10 needs L' = 6.
  const Solution s = *SolveTreeBase(t, std::vector<int64_t>{1, 0}, 10, 1);
  EXPECT_EQ(s.extended_roots, 5);
  const HstTree e = *ExtendRoot(t, 6);
  for (VertexId v : s.superset) EXPECT_LT(v, e.num_vertices());
  // Only the new root is marked, so the client travels up to it.
  EXPECT_THAT(s.superset, ElementsAre(e.root()));
  EXPECT_EQ(s.cost.total, 10 + e.Span(6));
}

TEST(SolveTreeBaseTest, ApproximationBoundsAgainstOracle) {
  Rng rng(4);
  for (int i = 0; i < 200; ++i) {
    const auto c = RandomTreeCase(rng, 1.5, 12, 5);
    for (double epsilon : {0.5, 1.0, 2.0}) {
      const Solution s =
          *SolveTreeBase(c.tree, c.clients, c.facility_cost, epsilon);
      const double opt = OptTreeDp(c.tree, c.clients, c.facility_cost)->cost;
      EXPECT_LE(s.cost.facility, (1 + 1 / epsilon) * opt * (1 + 1e-12));
      EXPECT_LE(s.cost.connection, 2 * 1.5 / 0.5 * opt * (1 + 1e-12));
    }
  }
}

TEST(SolveTreeTest, StructuralInvariants) {
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const auto c = RandomTreeCase(rng, 1.5, 12, 5);
    for (bool dp : {false, true}) {
      const Solution s =
          dp ? *SolveTreeDp(c.tree, c.clients, c.facility_cost, 1, i)
             : *SolveTreeBase(c.tree, c.clients, c.facility_cost, 1);
      const HstTree t = *ExtendRoot(c.tree, c.tree.depth() + s.extended_roots);
      EXPECT_TRUE(IsAntichain(t, s.superset));
      EXPECT_EQ(s.superset, MinSet(t, s.marked.marked));
      for (VertexId v : s.open) {
        EXPECT_NE(std::find(s.superset.begin(), s.superset.end(), v),
                  s.superset.end());
      }
      EXPECT_EQ(s.cost.total, s.cost.facility + s.cost.connection);
    }
  }
}

TEST(SolveTreeDpTest, DeterministicPerSeed) {
  const Solution a =
      *SolveTreeDp(WorkedTree(), WorkedClients(), kWFacilityCost, 1, 42);
  const Solution b =
      *SolveTreeDp(WorkedTree(), WorkedClients(), kWFacilityCost, 1, 42);
  EXPECT_EQ(a.superset, b.superset);
  EXPECT_EQ(a.marked, b.marked);
  EXPECT_EQ(a.cost, b.cost);
  EXPECT_EQ(a.seed, 42u);
}

TEST(SolveTreeDpTest, MeanCostOnWorkedInstance) {
  double total = 0;
  for (uint64_t seed = 0; seed < 1000; ++seed) {
    total += SolveTreeDp(WorkedTree(), WorkedClients(), kWFacilityCost, 1, seed)
                 ->cost.total;
  }
  EXPECT_LE(total / 1000, 50 * 4.5);
}

TEST(SolveTreeTest, LeafOnlyProjection) {
  Rng rng(6);
  for (int i = 0; i < 100; ++i) {
    const auto c = RandomTreeCase(rng, 1.5, 10, 4);
    const Solution s = *SolveTreeDp(c.tree, c.clients, c.facility_cost, 1, i,
                                    {.leaf_only = true});
    const HstTree t = *ExtendRoot(c.tree, c.tree.depth() + s.extended_roots);
    for (VertexId v : s.open) EXPECT_TRUE(t.is_leaf(v));
    const Solution raw = *SolveTreeDp(c.tree, c.clients, c.facility_cost, 1, i);
    EXPECT_LE(s.cost.connection, 2 * raw.cost.connection + 1e-12);
    EXPECT_LE(s.open.size(), raw.open.size());
  }
}

TEST(SolveTreeTest, ReturnAllMarked) {
  const Solution s = *SolveTreeBase(WorkedTree(), WorkedClients(),
                                    kWFacilityCost, 1,
                                    {.return_all_marked = true});
  EXPECT_THAT(s.superset, ElementsAre(kWRoot, kWU2, kWV3));
  // v1 is 2.5 from the root and 5 from v3.
  EXPECT_THAT(s.open, ElementsAre(kWRoot, kWV3));
}

TEST(SolveTreeTest, RejectsBadInput) {
  EXPECT_FALSE(SolveTreeBase(WorkedTree(), std::vector<int64_t>{1, 2}, 1, 1).ok());
  EXPECT_FALSE(SolveTreeBase(WorkedTree(), WorkedClients(), 1, 0).ok());
  const HstTree wide = *HstTree::Create(2.5, 1, {{1, -1, -1}, {0, 0, 0}});
  EXPECT_FALSE(SolveTreeBase(wide, std::vector<int64_t>{1}, 1, 1).ok());
}

}  // namespace
}  // namespace dpufl
