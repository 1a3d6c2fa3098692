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

#include "dpufl/general_solver.h"

#include <algorithm>

#include "absl/status/status.h"
#include "dpufl/status_macros.h"

namespace dpufl {
namespace {

absl::StatusOr<GeneralSolution> SolveGeneralImpl(
    const UflInstance& instance, double epsilon, double lambda,
    uint64_t tree_seed, std::optional<uint64_t> noise_seed) {
  if (instance.size() == 0) {
    return absl::InvalidArgumentError("instance: no points");
  }
  GeneralSolution out;
  out.tree_seed = tree_seed;
  out.noise_seed = noise_seed;

  // The embedding only ever sees the metric.
  Metric embedded = instance.metric;
  if (instance.metric.Diameter() > 0) {
    DPUFL_ASSIGN_OR_RETURN(RescaledMetric rescaled,
                           RescaleMetric(instance.metric));
    embedded = std::move(rescaled.metric);
    out.scale = rescaled.scale;
  }
  Rng tree_rng(tree_seed);
  DPUFL_ASSIGN_OR_RETURN(out.embedding, FrtEmbed(embedded, lambda, tree_rng));

  const double scaled_f = instance.facility_cost / out.scale;
  if (noise_seed.has_value()) {
    DPUFL_ASSIGN_OR_RETURN(out.tree_solution,
                           SolveTreeDp(out.embedding.tree, instance.clients,
                                       scaled_f, epsilon, *noise_seed));
  } else {
    DPUFL_ASSIGN_OR_RETURN(out.tree_solution,
                           SolveTreeBase(out.embedding.tree, instance.clients,
                                         scaled_f, epsilon));
  }
  DPUFL_ASSIGN_OR_RETURN(
      const HstTree tree,
      ExtendRoot(out.embedding.tree,
                 out.embedding.tree.depth() + out.tree_solution.extended_roots));

  out.serving_points.assign(instance.size(), -1);
  double tree_connection = 0;
  double original_connection = 0;
  for (PointId p = 0; p < instance.size(); ++p) {
    const VertexId s = out.tree_solution.serving[p];
    if (s < 0) continue;
    const VertexId leaf = CanonicalLeaf(tree, s);
    const PointId q = tree.point(leaf);
    out.serving_points[p] = q;
    out.open_points.push_back(q);
    const double weight = static_cast<double>(instance.clients[p]);
    tree_connection += weight * TreeDistance(tree, tree.leaf(p), leaf);
    original_connection += weight * instance.metric(p, q);
  }
  auto& open = out.open_points;
  std::sort(open.begin(), open.end());
  open.erase(std::unique(open.begin(), open.end()), open.end());

  const double facility = static_cast<double>(open.size()) * instance.facility_cost;
  out.cost_in_tree = {facility, tree_connection * out.scale,
                      facility + tree_connection * out.scale};
  out.cost_in_original = {facility, original_connection,
                          facility + original_connection};
  return out;
}

}  // namespace

absl::StatusOr<GeneralSolution> SolveGeneral(const UflInstance& instance,
                                             double epsilon, double lambda,
                                             uint64_t tree_seed,
                                             uint64_t noise_seed) {
  return SolveGeneralImpl(instance, epsilon, lambda, tree_seed, noise_seed);
}

absl::StatusOr<GeneralSolution> SolveGeneralBase(const UflInstance& instance,
                                                 double epsilon, double lambda,
                                                 uint64_t tree_seed) {
  return SolveGeneralImpl(instance, epsilon, lambda, tree_seed, std::nullopt);
}

}  // namespace dpufl
