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

#ifndef DPUFL_GENERAL_SOLVER_H_
#define DPUFL_GENERAL_SOLVER_H_

#include <cstdint>
#include <vector>

#include "absl/status/statusor.h"
#include "dpufl/frt.h"
#include "dpufl/instance.h"
#include "dpufl/tree_solver.h"

namespace dpufl {

struct GeneralSolution {
  EmbeddingResult embedding;
  // Original distance = embedded-metric distance * scale.
  double scale = 1;
  // Solution on the embedding tree, in rescaled units.
  Solution tree_solution;
  // Canonical-leaf projection of the open set, as point ids.
  std::vector<PointId> open_points;
  // Point serving each location (projection of the tree assignment), -1
  // where there are no clients.
  std::vector<PointId> serving_points;
  // Costs of the projected solution in original units, measured with d_T
  // and with the input metric.
  CostBreakdown cost_in_tree;
  CostBreakdown cost_in_original;
  uint64_t tree_seed = 0;
  std::optional<uint64_t> noise_seed;
};

// Embeds the metric (the embedding never sees the clients), runs the DP tree
// solver and reports both cost views.
absl::StatusOr<GeneralSolution> SolveGeneral(const UflInstance& instance,
                                             double epsilon, double lambda,
                                             uint64_t tree_seed,
                                             uint64_t noise_seed);

// Same pipeline with the non-private tree solver.
absl::StatusOr<GeneralSolution> SolveGeneralBase(const UflInstance& instance,
                                                 double epsilon, double lambda,
                                                 uint64_t tree_seed);

}  // namespace dpufl

#endif  // DPUFL_GENERAL_SOLVER_H_
