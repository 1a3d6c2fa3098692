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

#ifndef DPUFL_FRT_H_
#define DPUFL_FRT_H_

#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "dpufl/hst.h"
#include "dpufl/instance.h"
#include "dpufl/random.h"

namespace dpufl {

struct RescaledMetric {
  Metric metric;
  // Original distance = rescaled distance * scale.
  double scale = 1;
};

// Divides every distance by the minimum nonzero distance. Fails with
// "degenerate metric" when no nonzero distance exists.
absl::StatusOr<RescaledMetric> RescaleMetric(const Metric& metric);

struct EmbeddingResult {
  HstTree tree;
  double beta = 1;
  // permutation[k] is the point with rank k.
  std::vector<PointId> permutation;
};

// Random hierarchical partition of a rescaled metric (minimum nonzero
// distance >= 1) into a lambda-HST whose leaves are the points. Cluster radius
// at tree level i is beta * lambda^(i-2) with beta = lambda^U, U ~ U[0,1); each
// point joins the first point in permutation order within that radius, inside
// its parent cluster. Tree distances never undercut metric distances.
// Requires 1 < lambda <= 2.
absl::StatusOr<EmbeddingResult> FrtEmbed(const Metric& metric, double lambda,
                                         Rng& rng);

struct ExpansionStats {
  // Pairs (u < v) with d(u, v) > 0, in row-major order.
  std::vector<std::pair<PointId, PointId>> pairs;
  std::vector<double> mean_ratio;
  std::vector<double> max_ratio;
  std::vector<double> min_ratio;
  double global_mean = 0;  // mean over pairs of mean_ratio
  double global_max = 0;
  double global_min = 0;
};

absl::StatusOr<ExpansionStats> ComputeExpansionStats(
    const Metric& metric, std::span<const EmbeddingResult> results);

}  // namespace dpufl

#endif  // DPUFL_FRT_H_
