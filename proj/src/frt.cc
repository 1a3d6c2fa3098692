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

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace dpufl {

absl::StatusOr<RescaledMetric> RescaleMetric(const Metric& metric) {
  const double min_nonzero = metric.MinNonzero();
  if (!(min_nonzero > 0)) {
    return absl::InvalidArgumentError(
        "degenerate metric: no nonzero distance");
  }
  if (min_nonzero == 1) return RescaledMetric{metric, 1.0};
  return RescaledMetric{metric.Scaled(1.0 / min_nonzero), min_nonzero};
}

namespace {

// ceil(log_lambda diameter) + 1. Any two points meeting only at the root are
// at tree distance 2 * (lambda^L - 1)/(lambda - 1) >= 2 lambda^(L-1) >= 2 Delta.
int EmbeddingDepth(double diameter, double lambda) {
  if (diameter <= 0) return 1;
  int k = 0;
  double p = 1;
  while (p < diameter) {
    p *= lambda;
    ++k;
  }
  return k + 1;
}

}  // namespace

absl::StatusOr<EmbeddingResult> FrtEmbed(const Metric& metric, double lambda,
                                         Rng& rng) {
  if (!(lambda > 1) || lambda > 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("lambda: must lie in (1, 2], got ", lambda));
  }
  const int n = metric.size();
  if (n == 0) return absl::InvalidArgumentError("metric: no points");
  const double min_nonzero = metric.MinNonzero();
  if (min_nonzero > 0 && min_nonzero < 1 - kMetricTolerance) {
    return absl::InvalidArgumentError(
        "metric: minimum nonzero distance below 1; rescale first");
  }

  EmbeddingResult result;
  result.beta = std::pow(lambda, rng.Uniform01());
  result.permutation.resize(n);
  for (int i = 0; i < n; ++i) result.permutation[i] = i;
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.UniformInt(static_cast<uint64_t>(i) + 1));
    std::swap(result.permutation[i], result.permutation[j]);
  }

  const int depth = EmbeddingDepth(metric.Diameter(), lambda);
  std::vector<HstVertex> vertices;
  vertices.push_back({depth, -1, -1});

  // Clusters at the current level: vertex id and member points (ascending).
  struct Cluster {
    VertexId vertex;
    std::vector<PointId> members;
  };
  std::vector<Cluster> clusters;
  {
    Cluster root{0, {}};
    for (int p = 0; p < n; ++p) root.members.push_back(p);
    clusters.push_back(std::move(root));
  }

  // Radius at level l is beta * lambda^(l-2).
  const auto radius = [&](int l) {
    return result.beta * std::pow(lambda, static_cast<double>(l - 2));
  };

  for (int l = depth - 1; l >= 1; --l) {
    const double r = radius(l);
    std::vector<Cluster> next;
    for (const Cluster& parent : clusters) {
      // Center rank per member; members of the parent only.
      std::map<int, std::vector<PointId>> by_center;
      for (PointId p : parent.members) {
        for (int k = 0; k < n; ++k) {
          if (metric(result.permutation[k], p) <= r) {
            by_center[k].push_back(p);
            break;
          }
        }
      }
      for (auto& [rank, members] : by_center) {
        const VertexId id = static_cast<VertexId>(vertices.size());
        vertices.push_back({l, parent.vertex, -1});
        next.push_back({id, std::move(members)});
      }
    }
    clusters = std::move(next);
  }

  // Leaves: one per point, in point order within each level-1 cluster.
  std::vector<VertexId> leaf_of(n, -1);
  for (const Cluster& c : clusters) {
    for (PointId p : c.members) {
      leaf_of[p] = static_cast<VertexId>(vertices.size());
      vertices.push_back({0, c.vertex, p});
    }
  }
  for (int p = 0; p < n; ++p) {
    if (leaf_of[p] < 0) {
      return absl::InternalError(
          absl::StrCat("point ", p, " was not covered by any cluster"));
    }
  }
  auto tree = HstTree::Create(lambda, depth, std::move(vertices));
  if (!tree.ok()) return tree.status();
  result.tree = *std::move(tree);
  return result;
}

absl::StatusOr<ExpansionStats> ComputeExpansionStats(
    const Metric& metric, std::span<const EmbeddingResult> results) {
  if (results.empty()) {
    return absl::InvalidArgumentError("expansion_stats: no embeddings");
  }
  const int n = metric.size();
  ExpansionStats stats;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (metric(u, v) > 0) stats.pairs.emplace_back(u, v);
    }
  }
  const size_t num_pairs = stats.pairs.size();
  stats.mean_ratio.assign(num_pairs, 0);
  stats.max_ratio.assign(num_pairs, 0);
  stats.min_ratio.assign(num_pairs, std::numeric_limits<double>::infinity());
  for (const EmbeddingResult& r : results) {
    if (r.tree.num_points() != n) {
      return absl::InvalidArgumentError(
          "expansion_stats: embedding has a different point count");
    }
    for (size_t i = 0; i < num_pairs; ++i) {
      const auto [u, v] = stats.pairs[i];
      const double ratio =
          TreeDistance(r.tree, r.tree.leaf(u), r.tree.leaf(v)) / metric(u, v);
      stats.mean_ratio[i] += ratio;
      stats.max_ratio[i] = std::max(stats.max_ratio[i], ratio);
      stats.min_ratio[i] = std::min(stats.min_ratio[i], ratio);
    }
  }
  stats.global_min = num_pairs ? std::numeric_limits<double>::infinity() : 1;
  for (size_t i = 0; i < num_pairs; ++i) {
    stats.mean_ratio[i] /= static_cast<double>(results.size());
    stats.global_mean += stats.mean_ratio[i];
    stats.global_max = std::max(stats.global_max, stats.max_ratio[i]);
    stats.global_min = std::min(stats.global_min, stats.min_ratio[i]);
  }
  if (num_pairs) stats.global_mean /= static_cast<double>(num_pairs);
  return stats;
}

}  // namespace dpufl
