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

#ifndef DPUFL_TREE_SOLVER_H_
#define DPUFL_TREE_SOLVER_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "dpufl/hst.h"
#include "dpufl/instance.h"
#include "dpufl/random.h"

namespace dpufl {

// Smallest non-negative l with lambda^l >= epsilon * f.
int ComputeLPrime(double facility_cost, double epsilon, double lambda);

struct SolverParams {
  double epsilon = 1;
  double facility_cost = 1;
  double lambda = 1.5;
  double eta = 0;       // sqrt(lambda)
  double c = 0;         // (eta - 1) / eta^2
  int l_prime = 0;

  // Accepts lambda in (1, 2]; the approximation guarantee needs lambda < 2.
  static absl::StatusOr<SolverParams> Create(double epsilon,
                                             double facility_cost,
                                             double lambda);
};

// Scale of the Laplace noise added to counts at `level`:
// f / (c * eta^(L' + level)). Only levels below L' are noised.
absl::StatusOr<double> LaplaceScale(int level, const SolverParams& params);

// Inverse-CDF Laplace sample for u in (-1/2, 1/2).
double LaplaceFromUniform(double scale, double u);
double SampleLaplace(double scale, Rng& rng);

struct MarkedSet {
  std::vector<bool> marked;
  // Noisy count per vertex, present only where noise was drawn.
  std::vector<std::optional<double>> noisy_counts;

  std::vector<VertexId> Members() const;
  bool operator==(const MarkedSet&) const = default;
};

// Marks every vertex at level >= L' and every vertex with
// N_v * lambda^level >= f. Requires depth >= L'.
MarkedSet MarkBase(const HstTree& tree, const SubtreeCounts& counts,
                   const SolverParams& params);

// As MarkBase with N_v replaced by N_v + Lap(LaplaceScale(level)) below L'.
// Noise is drawn in vertex-id order.
MarkedSet MarkNoisy(const HstTree& tree, const SubtreeCounts& counts,
                    const SolverParams& params, Rng& rng);

std::vector<VertexId> SelectSuperset(const HstTree& tree,
                                     const MarkedSet& marked);

struct Assignment {
  std::vector<VertexId> open;
  // Serving vertex per point, -1 for points without clients.
  std::vector<VertexId> serving;
  CostBreakdown cost;
};

// Connects every populated point to its nearest member of `superset` under
// the tree metric (ties to the smallest id) and opens the members that
// received clients.
absl::StatusOr<Assignment> ClosestFacilityRule(
    const HstTree& tree, std::span<const int64_t> clients,
    std::span<const VertexId> superset, double facility_cost);

struct SolveOptions {
  // Project internal open vertices to their canonical leaf.
  bool leaf_only = false;
  // Return every marked vertex instead of min-set(M) (comparison baseline).
  bool return_all_marked = false;
};

struct Solution {
  std::vector<VertexId> superset;
  std::vector<VertexId> open;
  std::vector<VertexId> serving;
  CostBreakdown cost;
  std::optional<uint64_t> seed;
  // Roots appended by ExtendRoot to reach depth L'; vertex ids refer to
  // ExtendRoot(tree, tree.depth() + extended_roots).
  int extended_roots = 0;
  MarkedSet marked;
};

// Non-private marking, min-set, closest-facility rule.
absl::StatusOr<Solution> SolveTreeBase(const HstTree& tree,
                                       std::span<const int64_t> clients,
                                       double facility_cost, double epsilon,
                                       const SolveOptions& options = {});

// epsilon-DP version with Laplace-noised counts.
absl::StatusOr<Solution> SolveTreeDp(const HstTree& tree,
                                     std::span<const int64_t> clients,
                                     double facility_cost, double epsilon,
                                     uint64_t seed,
                                     const SolveOptions& options = {});

// Tree actually used by the solvers for the given parameters.
absl::StatusOr<HstTree> PrepareTree(const HstTree& tree,
                                    const SolverParams& params);

}  // namespace dpufl

#endif  // DPUFL_TREE_SOLVER_H_
