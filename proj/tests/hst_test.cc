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

#include "dpufl/hst.h"

#include <algorithm>
#include <vector>

#include "dpufl/oracle.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace dpufl {
namespace {

using ::dpufl::testing::kWFacilityCost;
using ::dpufl::testing::kWRoot;
using ::dpufl::testing::kWU1;
using ::dpufl::testing::kWU2;
using ::dpufl::testing::kWV1;
using ::dpufl::testing::kWV2;
using ::dpufl::testing::kWV3;
using ::dpufl::testing::kWV4;
using ::dpufl::testing::RandomTreeCase;
using ::dpufl::testing::WorkedClients;
using ::dpufl::testing::WorkedTree;
using ::testing::ElementsAre;
using ::testing::IsEmpty;
using ::testing::UnorderedElementsAreArray;

bool HasKind(const std::vector<HstViolation>& report, HstViolation::Kind kind) {
  return std::any_of(report.begin(), report.end(),
                     [&](const HstViolation& v) { return v.kind == kind; });
}

// Definition-level min-set: members with no marked proper descendant.
std::vector<VertexId> BruteMinSet(const HstTree& tree,
                                  const std::vector<VertexId>& marked) {
  std::vector<VertexId> out;
  for (VertexId u : marked) {
    bool minimal = true;
    for (VertexId w : marked) {
      if (w != u && tree.IsAncestorOrSelf(u, w)) minimal = false;
    }
    if (minimal) out.push_back(u);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<VertexId> RandomSubset(const HstTree& tree, Rng& rng) {
  std::vector<VertexId> out;
  for (VertexId v = 0; v < tree.num_vertices(); ++v) {
    if (rng.Bernoulli(0.3)) out.push_back(v);
  }
  return out;
}

std::vector<VertexId> Sorted(std::vector<VertexId> v) {
  std::sort(v.begin(), v.end());
  return v;
}

TEST(ValidateHstTest, SingleEdgeTree) {
  const auto tree = HstTree::Create(1.5, 1, {{1, -1, -1}, {0, 0, 0}});
  ASSERT_TRUE(tree.ok());
  EXPECT_THAT(ValidateHst(*tree), IsEmpty());
}

TEST(ValidateHstTest, WorkedTreeIsValid) {
  EXPECT_THAT(ValidateHst(WorkedTree()), IsEmpty());
}

TEST(ValidateHstTest, ShortPath) {
  const auto tree = HstTree::Create(1.5, 3, {{3, -1, -1}, {1, 0, 0}});
  ASSERT_TRUE(tree.ok());
  EXPECT_TRUE(HasKind(ValidateHst(*tree), HstViolation::Kind::kPathLength));
}

TEST(ValidateHstTest, LevelSkip) {
  const auto tree = HstTree::Create(
      1.5, 2, {{2, -1, -1}, {1, 0, -1}, {0, 1, 0}, {0, 0, 1}});
  ASSERT_TRUE(tree.ok());
  EXPECT_TRUE(HasKind(ValidateHst(*tree), HstViolation::Kind::kLevel));
}

TEST(ValidateHstTest, PointProblems) {
  const auto tree = HstTree::Create(
      1.5, 1, {{1, -1, 0}, {0, 0, 0}, {0, 0, -1}});
  ASSERT_TRUE(tree.ok());
  EXPECT_TRUE(HasKind(ValidateHst(*tree), HstViolation::Kind::kPoint));
}

TEST(ValidateHstTest, TwoRoots) {
  const auto tree = HstTree::Create(1.5, 1, {{1, -1, -1}, {1, -1, -1}});
  if (tree.ok()) {
    EXPECT_TRUE(HasKind(ValidateHst(*tree), HstViolation::Kind::kRoot));
  }
}

TEST(ValidateHstTest, RandomTreesAreValid) {
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    const auto c = RandomTreeCase(rng, 1.5, 12, 5);
    EXPECT_THAT(ValidateHst(c.tree), IsEmpty());
  }
}

TEST(TreeDistanceTest, Examples) {
  const HstTree t = WorkedTree();
  EXPECT_EQ(TreeDistance(t, kWV1, kWU1), 1.0);
  EXPECT_EQ(TreeDistance(t, kWV1, kWV3), 5.0);
  EXPECT_EQ(TreeDistance(t, kWV1, kWV2), 2.0);
  EXPECT_EQ(TreeDistance(t, kWV1, kWRoot), 2.5);
  EXPECT_EQ(TreeDistance(t, kWV3, kWV3), 0.0);
  EXPECT_EQ(Lca(t, kWV1, kWV2), kWU1);
  EXPECT_EQ(Lca(t, kWV1, kWV4), kWRoot);
}

TEST(TreeDistanceTest, AncestorFact) {
  // lambda^(l(u)-1) <= d_T(u, v) <= lambda^l(u) / (lambda - 1).
  Rng rng(2);
  for (int i = 0; i < 50; ++i) {
    const auto c = RandomTreeCase(rng, 1.5, 10, 5);
    const HstTree& t = c.tree;
    for (VertexId leaf : t.Leaves()) {
      for (VertexId u = t.parent(leaf); u != -1; u = t.parent(u)) {
        const double d = TreeDistance(t, u, leaf);
        const int l = t.level(u);
        EXPECT_GE(d, t.Power(l - 1));
        EXPECT_LE(d, t.Power(l) / (t.lambda() - 1));
      }
    }
  }
}

TEST(TreeDistanceTest, MetricAxioms) {
  Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    const auto c = RandomTreeCase(rng, 1.5, 8, 4);
    const HstTree& t = c.tree;
    const int n = t.num_vertices();
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        const double ab = TreeDistance(t, a, b);
        EXPECT_EQ(ab, TreeDistance(t, b, a));
        EXPECT_EQ(ab == 0, a == b);
        for (int x = 0; x < n; ++x) {
          EXPECT_LE(ab, TreeDistance(t, a, x) + TreeDistance(t, x, b) + 1e-12);
        }
      }
    }
  }
}

TEST(SubtreeCountsTest, Examples) {
  const HstTree t = WorkedTree();
  EXPECT_THAT(ComputeSubtreeCounts(t, std::vector<int64_t>{0, 0, 0, 0}),
              ElementsAre(0, 0, 0, 0, 0, 0, 0));
  EXPECT_THAT(ComputeSubtreeCounts(t, std::vector<int64_t>{0, 0, 7, 0}),
              ElementsAre(7, 0, 7, 0, 0, 7, 0));
  EXPECT_THAT(ComputeSubtreeCounts(t, std::vector<int64_t>{3, 4, 0, 0}),
              ElementsAre(7, 7, 0, 3, 4, 0, 0));
}

TEST(SubtreeCountsTest, Additivity) {
  Rng rng(4);
  for (int i = 0; i < 50; ++i) {
    const auto c = RandomTreeCase(rng, 1.5, 12, 5);
    const SubtreeCounts counts = ComputeSubtreeCounts(c.tree, c.clients);
    int64_t total = 0;
    for (int64_t x : c.clients) total += x;
    EXPECT_EQ(counts[c.tree.root()], total);
    for (VertexId u = 0; u < c.tree.num_vertices(); ++u) {
      if (c.tree.is_leaf(u)) {
        EXPECT_EQ(counts[u], c.clients[c.tree.point(u)]);
        continue;
      }
      int64_t sum = 0;
      for (VertexId ch : c.tree.children(u)) sum += counts[ch];
      EXPECT_EQ(counts[u], sum);
    }
  }
}

TEST(MinSetTest, Examples) {
  const HstTree t = WorkedTree();
  EXPECT_THAT(MinSet(t, std::vector<VertexId>{kWRoot}), ElementsAre(kWRoot));
  EXPECT_THAT(MinSet(t, std::vector<VertexId>{kWRoot, kWV1}),
              ElementsAre(kWV1));
  EXPECT_THAT(MinSet(t, std::vector<VertexId>{kWRoot, kWU1}),
              ElementsAre(kWU1));
  EXPECT_THAT(MinSet(t, std::vector<VertexId>{kWRoot, kWU2, kWV3}),
              ElementsAre(kWV3));
}

TEST(MinSetTest, MatchesDefinitionAndIsIdempotentAntichain) {
  Rng rng(5);
  for (int i = 0; i < 300; ++i) {
    const auto c = RandomTreeCase(rng, 1.5, 10, 5);
    const std::vector<VertexId> marked = RandomSubset(c.tree, rng);
    const std::vector<VertexId> min_set = Sorted(MinSet(c.tree, marked));
    EXPECT_EQ(min_set, BruteMinSet(c.tree, marked));
    EXPECT_TRUE(IsAntichain(c.tree, min_set));
    for (VertexId v : min_set) {
      EXPECT_NE(std::find(marked.begin(), marked.end(), v), marked.end());
    }
    EXPECT_EQ(Sorted(MinSet(c.tree, min_set)), min_set);
  }
}

TEST(MinSetTest, AddingOneGrowsByAtMostOne) {
  Rng rng(6);
  for (int i = 0; i < 300; ++i) {
    const auto c = RandomTreeCase(rng, 1.5, 10, 5);
    std::vector<VertexId> marked = RandomSubset(c.tree, rng);
    const VertexId v =
        static_cast<VertexId>(rng.UniformInt(c.tree.num_vertices()));
    if (std::find(marked.begin(), marked.end(), v) != marked.end()) continue;
    const std::vector<VertexId> before = Sorted(MinSet(c.tree, marked));
    const auto change = ClassifyMinSetChange(c.tree, marked, v);
    ASSERT_TRUE(change.ok());
    marked.push_back(v);
    const std::vector<VertexId> after = Sorted(MinSet(c.tree, marked));
    EXPECT_LE(after.size(), before.size() + 1);

    std::vector<VertexId> expected = before;
    switch (change->kind) {
      case MinSetChange::Kind::kUnchanged:
        break;
      case MinSetChange::Kind::kAdded:
        expected.push_back(v);
        break;
      case MinSetChange::Kind::kReplaced:
        std::erase(expected, change->replaced);
        expected.push_back(v);
        EXPECT_TRUE(c.tree.IsAncestorOrSelf(change->replaced, v));
        break;
    }
    EXPECT_EQ(Sorted(expected), after);
  }
}

TEST(MinSetChangeTest, Examples) {
  const HstTree t = WorkedTree();
  EXPECT_EQ(*ClassifyMinSetChange(t, std::vector<VertexId>{kWV1}, kWU1),
            MinSetChange{MinSetChange::Kind::kUnchanged});
  EXPECT_EQ(*ClassifyMinSetChange(t, std::vector<VertexId>{kWU1}, kWU2),
            MinSetChange{MinSetChange::Kind::kAdded});
  EXPECT_EQ(*ClassifyMinSetChange(t, std::vector<VertexId>{kWRoot}, kWV1),
            (MinSetChange{MinSetChange::Kind::kReplaced, kWRoot}));
  EXPECT_FALSE(ClassifyMinSetChange(t, std::vector<VertexId>{kWV1}, kWV1).ok());
}

TEST(BValueTest, Examples) {
  const HstTree t = WorkedTree();
  const SubtreeCounts counts = ComputeSubtreeCounts(t, WorkedClients());
  EXPECT_EQ(BValue(t, counts, kWFacilityCost, kWV2), 0.0);
  EXPECT_EQ(BValue(t, counts, kWFacilityCost, kWV3), 2.25);
  EXPECT_EQ(BValue(t, counts, kWFacilityCost, kWU1), 1.5);
}

TEST(AntichainLowerBoundTest, Examples) {
  const HstTree t = WorkedTree();
  const SubtreeCounts counts = ComputeSubtreeCounts(t, WorkedClients());
  EXPECT_EQ(*AntichainLowerBound(t, counts, kWFacilityCost, {}), 0.0);
  const std::vector<VertexId> leaves = {kWV1, kWV2, kWV3, kWV4};
  EXPECT_EQ(*AntichainLowerBound(t, counts, kWFacilityCost, leaves), 3.25);
  const std::vector<VertexId> chain = {kWU1, kWV1};
  EXPECT_FALSE(AntichainLowerBound(t, counts, kWFacilityCost, chain).ok());
}

TEST(AntichainLowerBoundTest, NeverExceedsOpt) {
  Rng rng(7);
  for (int i = 0; i < 300; ++i) {
    const auto c = RandomTreeCase(rng, 1.5, 12, 5);
    const SubtreeCounts counts = ComputeSubtreeCounts(c.tree, c.clients);
    const std::vector<VertexId> antichain =
        MinSet(c.tree, RandomSubset(c.tree, rng));
    const double bound =
        *AntichainLowerBound(c.tree, counts, c.facility_cost, antichain);
    const OptResult leaf_opt = *OptExhaustiveTree(
        c.tree, c.clients, c.facility_cost, FacilitySites::kLeavesOnly);
    const OptResult vertex_opt = *OptTreeDp(c.tree, c.clients, c.facility_cost);
    EXPECT_LE(bound, leaf_opt.cost);
    EXPECT_LE(bound, vertex_opt.cost);
  }
}

TEST(ExtendRootTest, SameDepthIsIdentity) {
  const HstTree t = WorkedTree();
  EXPECT_EQ(*ExtendRoot(t, 2), t);
  EXPECT_FALSE(ExtendRoot(t, 1).ok());
}

TEST(ExtendRootTest, PreservesLeafDistances) {
  const HstTree t = *HstTree::Create(
      2, 1, {{1, -1, -1}, {0, 0, 0}, {0, 0, 1}, {0, 0, 2}});
  const HstTree e = *ExtendRoot(t, 3);
  EXPECT_EQ(e.depth(), 3);
  EXPECT_EQ(e.num_vertices(), t.num_vertices() + 2);
  EXPECT_THAT(ValidateHst(e), IsEmpty());
  for (int p = 0; p < 3; ++p) {
    for (int q = 0; q < 3; ++q) {
      EXPECT_EQ(TreeDistance(e, e.leaf(p), e.leaf(q)),
                TreeDistance(t, t.leaf(p), t.leaf(q)));
    }
  }
}

TEST(CanonicalLeafTest, Examples) {
  const HstTree t = WorkedTree();
  EXPECT_EQ(CanonicalLeaf(t, kWV3), kWV3);
  EXPECT_EQ(CanonicalLeaf(t, kWU1), kWV1);
  EXPECT_EQ(CanonicalLeaf(t, kWRoot), kWV1);
  EXPECT_EQ(CanonicalLeaf(t, kWU2), kWV3);
}

TEST(CanonicalLeafTest, FactorTwoForOutsideLeaves) {
  Rng rng(8);
  for (int i = 0; i < 100; ++i) {
    const auto c = RandomTreeCase(rng, 1.5, 10, 5);
    const HstTree& t = c.tree;
    for (VertexId u = 0; u < t.num_vertices(); ++u) {
      const VertexId leaf = CanonicalLeaf(t, u);
      ASSERT_TRUE(t.is_leaf(leaf));
      EXPECT_TRUE(t.IsAncestorOrSelf(u, leaf));
      for (VertexId v : t.Leaves()) {
        if (t.IsAncestorOrSelf(u, v)) continue;
        EXPECT_LE(TreeDistance(t, v, leaf), 2 * TreeDistance(t, v, u));
      }
    }
  }
}

TEST(IsAntichainTest, Examples) {
  const HstTree t = WorkedTree();
  EXPECT_TRUE(IsAntichain(t, std::vector<VertexId>{kWU1, kWV3}));
  EXPECT_FALSE(IsAntichain(t, std::vector<VertexId>{kWRoot, kWV3}));
  EXPECT_TRUE(IsAntichain(t, std::vector<VertexId>{}));
}

}  // namespace
}  // namespace dpufl
