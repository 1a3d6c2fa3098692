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

#include "dpufl/frt.h"

#include <cmath>
#include <vector>

#include "dpufl/generators.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace dpufl {
namespace {

using ::testing::IsEmpty;

Metric RandomRescaledEuclidean(int n, Rng& rng) {
  const Metric m = *RandomEuclideanMetric(n, 2, 10.0, rng);
  return RescaleMetric(m)->metric;
}

void ExpectNonContracting(const Metric& m, const EmbeddingResult& e) {
  const HstTree& t = e.tree;
  for (int u = 0; u < m.size(); ++u) {
    for (int v = 0; v < m.size(); ++v) {
      ASSERT_GE(TreeDistance(t, t.leaf(u), t.leaf(v)), m(u, v))
          << "pair " << u << "," << v;
    }
  }
}

std::vector<PointId> SubtreePoints(const HstTree& t, VertexId u) {
  std::vector<PointId> out;
  for (VertexId leaf : t.Leaves()) {
    if (t.IsAncestorOrSelf(u, leaf)) out.push_back(t.point(leaf));
  }
  return out;
}

TEST(RescaleMetricTest, Examples) {
  const Metric unit = *Metric::FromTable({{0, 1}, {1, 0}});
  const RescaledMetric same = *RescaleMetric(unit);
  EXPECT_EQ(same.scale, 1.0);
  EXPECT_EQ(same.metric, unit);

  const Metric m = *Metric::FromTable({{0, 2, 4}, {2, 0, 2}, {4, 2, 0}});
  const RescaledMetric r = *RescaleMetric(m);
  EXPECT_EQ(r.scale, 2.0);
  EXPECT_EQ(r.metric, *Metric::FromTable({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}}));

  const auto single = RescaleMetric(*Metric::FromTable({{0}}));
  EXPECT_FALSE(single.ok());
  EXPECT_THAT(std::string(single.status().message()),
              ::testing::HasSubstr("degenerate metric"));
}

TEST(FrtEmbedTest, SinglePoint) {
  Rng rng(1);
  const auto e = FrtEmbed(*Metric::FromTable({{0}}), 1.5, rng);
  ASSERT_TRUE(e.ok()) << e.status();
  EXPECT_EQ(e->tree.depth(), 1);
  EXPECT_EQ(e->tree.num_points(), 1);
  EXPECT_THAT(ValidateHst(e->tree), IsEmpty());
}

TEST(FrtEmbedTest, TwoPointsLambdaTwo) {
  const Metric m = *Metric::FromTable({{0, 1}, {1, 0}});
  for (uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const EmbeddingResult e = *FrtEmbed(m, 2.0, rng);
    EXPECT_GE(TreeDistance(e.tree, e.tree.leaf(0), e.tree.leaf(1)), 1.0);
  }
}

TEST(FrtEmbedTest, RejectsBadInput) {
  const Metric m = *Metric::FromTable({{0, 1}, {1, 0}});
  Rng rng(1);
  EXPECT_FALSE(FrtEmbed(m, 1.0, rng).ok());
  EXPECT_FALSE(FrtEmbed(m, 2.5, rng).ok());
  EXPECT_FALSE(FrtEmbed(m.Scaled(0.5), 1.5, rng).ok());
}

TEST(FrtEmbedTest, DeterministicForSeed) {
  Rng metric_rng(3);
  const Metric m = RandomRescaledEuclidean(20, metric_rng);
  Rng a(99);
  Rng b(99);
  const EmbeddingResult ea = *FrtEmbed(m, 1.5, a);
  const EmbeddingResult eb = *FrtEmbed(m, 1.5, b);
  EXPECT_EQ(ea.tree, eb.tree);
  EXPECT_EQ(ea.beta, eb.beta);
  EXPECT_EQ(ea.permutation, eb.permutation);
}

TEST(FrtEmbedTest, StructureOnRandomMetrics) {
  Rng metric_rng(4);
  for (int instance = 0; instance < 20; ++instance) {
    const Metric m = RandomRescaledEuclidean(16, metric_rng);
    for (uint64_t seed = 0; seed < 20; ++seed) {
      Rng rng(seed);
      const double lambda = seed % 2 == 0 ? 1.5 : 2.0;
      const EmbeddingResult e = *FrtEmbed(m, lambda, rng);
      const HstTree& t = e.tree;
      ASSERT_THAT(ValidateHst(t), IsEmpty());
      EXPECT_GE(e.beta, 1.0);
      EXPECT_LT(e.beta, lambda);
      EXPECT_GE(t.Power(t.depth()), m.Diameter());
      ExpectNonContracting(m, e);
      // Every cluster below the root has diameter at most twice its radius.
      for (VertexId u = 0; u < t.num_vertices(); ++u) {
        const int l = t.level(u);
        if (l == 0 || u == t.root()) continue;
        const double radius = e.beta * std::pow(lambda, l - 2);
        const std::vector<PointId> pts = SubtreePoints(t, u);
        for (PointId p : pts) {
          for (PointId q : pts) EXPECT_LE(m(p, q), 2 * radius);
        }
      }
    }
  }
}

TEST(FrtEmbedTest, DuplicatePointsBecomeSiblings) {
  const Metric m = *Metric::FromTable({{0, 0, 3}, {0, 0, 3}, {3, 3, 0}});
  for (uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    const EmbeddingResult e = *FrtEmbed(m, 1.5, rng);
    const HstTree& t = e.tree;
    EXPECT_EQ(t.parent(t.leaf(0)), t.parent(t.leaf(1)));
    EXPECT_EQ(TreeDistance(t, t.leaf(0), t.leaf(1)), 2.0);
    ExpectNonContracting(m, e);
  }
}

TEST(FrtEmbedTest, MeanExpansionIsLogarithmic) {
  Rng metric_rng(5);
  const Metric m = RandomRescaledEuclidean(32, metric_rng);
  std::vector<EmbeddingResult> results;
  for (uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    results.push_back(*FrtEmbed(m, 1.5, rng));
  }
  const ExpansionStats stats = *ComputeExpansionStats(m, results);
  EXPECT_GE(stats.global_min, 1.0);
  EXPECT_LE(stats.global_mean, 16 * std::log2(32.0));
}

TEST(ExpansionStatsTest, SingleAndDuplicatedResults) {
  Rng metric_rng(6);
  const Metric m = RandomRescaledEuclidean(8, metric_rng);
  Rng rng(1);
  const EmbeddingResult e = *FrtEmbed(m, 1.5, rng);
  const ExpansionStats one = *ComputeExpansionStats(m, {&e, 1});
  for (size_t i = 0; i < one.pairs.size(); ++i) {
    EXPECT_GE(one.mean_ratio[i], 1.0);
    EXPECT_EQ(one.mean_ratio[i], one.max_ratio[i]);
  }
  const std::vector<EmbeddingResult> twice = {e, e};
  const ExpansionStats two = *ComputeExpansionStats(m, twice);
  for (size_t i = 0; i < one.pairs.size(); ++i) {
    EXPECT_DOUBLE_EQ(two.mean_ratio[i], one.mean_ratio[i]);
  }
}

TEST(ExpansionStatsTest, TwoPointRatio) {
  const Metric m = *Metric::FromTable({{0, 3}, {3, 0}});
  Rng rng(2);
  const EmbeddingResult e = *FrtEmbed(m, 1.5, rng);
  const ExpansionStats stats = *ComputeExpansionStats(m, {&e, 1});
  ASSERT_EQ(stats.pairs.size(), 1u);
  EXPECT_EQ(stats.mean_ratio[0],
            TreeDistance(e.tree, e.tree.leaf(0), e.tree.leaf(1)) / 3.0);
  EXPECT_FALSE(ComputeExpansionStats(m, {}).ok());
}

}  // namespace
}  // namespace dpufl
