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

#ifndef DPUFL_PRIVACY_AUDIT_H_
#define DPUFL_PRIVACY_AUDIT_H_

#include <cstdint>
#include <vector>

#include "absl/status/statusor.h"
#include "dpufl/hst.h"
#include "dpufl/tree_solver.h"

namespace dpufl {

struct PrivacyLedger {
  // epsilon_l = c * eta^(L' + l) / f for l in [0, L').
  std::vector<double> per_level;
  double total = 0;        // direct sum of per_level
  double closed_form = 0;  // (c eta^L' / f) (eta^L' - 1) / (eta - 1)
  double budget = 0;

  bool WithinBudget() const;
};

PrivacyLedger AnalyticEpsilon(const SolverParams& params);

// Sum of epsilon_l over the noised ancestors of `leaf` (including itself).
double PathEpsilon(const HstTree& tree, const SolverParams& params,
                   VertexId leaf);

double LaplaceCdf(double x, double scale);
// Pr[X >= t] for X ~ Lap(scale).
double LaplaceTail(double t, double scale);

// Pr[(count + Lap(b(level))) * lambda^level >= f]; 1 for level >= L'.
double MarkingProb(int64_t count, int level, const SolverParams& params);

struct NeighborRatio {
  double max_ratio = 1;
  double bound = 1;
  bool unbounded = false;
  bool within_bound = true;
};

inline constexpr double kRatioTolerance = 1e-9;

// Largest ratio between marking (or not marking) probabilities of counts N
// and N+1, N in [0, max_count], for a Laplace threshold test
// count + Lap(scale) >= threshold. scale == 0 is the deterministic test.
NeighborRatio NeighborRatioForScale(double threshold, double scale,
                                    int64_t max_count, double epsilon_bound);

// The same at a solver level, against exp(epsilon_level).
absl::StatusOr<NeighborRatio> NeighborRatioCheck(int level,
                                                 const SolverParams& params,
                                                 int64_t max_count);

}  // namespace dpufl

#endif  // DPUFL_PRIVACY_AUDIT_H_
