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

#ifndef DPUFL_LOWERBOUND_H_
#define DPUFL_LOWERBOUND_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "dpufl/hst.h"
#include "dpufl/instance.h"
#include "dpufl/random.h"

namespace dpufl {

// Uniform star with n leaves, radius sqrt(epsilon) * f, and per-leaf client
// counts drawn from {1, m}, m = ceil(1/epsilon).
struct StarFamily {
  int n = 1;
  double facility_cost = 1;
  double epsilon = 0.5;
  int64_t m = 2;
  double radius = 0;

  static absl::StatusOr<StarFamily> Create(int n, double epsilon,
                                           double facility_cost);
  // Probability of a leaf holding a single client: sqrt(m) / (sqrt(m) + 1).
  double ProbOne() const;
};

// Point 0 is the center, points 1..n the leaves. Clients are all zero.
absl::StatusOr<UflInstance> MakeStarInstance(int n, double epsilon,
                                             double facility_cost);

// Center gets 0, each leaf 1 or m independently.
ClientVector SampleClientVector(const StarFamily& family, Rng& rng);

// Costs of the two-point instance (leaf a, free center b at distance f/sqrt m)
// with 1 or m clients at a.
struct TwoPointCostTable {
  double one_closed = 0;
  double one_open = 0;
  double many_closed = 0;
  double many_open = 0;
};
TwoPointCostTable MakeTwoPointCostTable(double facility_cost, int64_t m);

// P-average of the per-leaf optimum: 2 f / (sqrt(m) + 1).
double ExpectedOptPerLeaf(double facility_cost, int64_t m);

struct Policy {
  enum class Kind { kOpenAll, kOpenNone, kThreshold, kDpSolver };
  Kind kind = Kind::kOpenAll;
  int64_t threshold = 0;     // kThreshold: open iff N_i >= threshold
  double epsilon = 0;        // kDpSolver; 0 means the family epsilon
  double lambda = 1.5;       // kDpSolver

  // "open-all", "open-none", "threshold", "threshold:<k>", "dp-solver".
  static absl::StatusOr<Policy> Parse(const std::string& name);
  std::string Name() const;
};

// The star as a lambda-HST: the center is the root at level L and each leaf
// hangs off a chain of L edges, so the radius is (lambda^L - 1)/(lambda - 1).
// L is the smallest level reaching the family radius; `scale` converts tree
// units to family units (tree radius * scale = family radius).
struct StarHst {
  HstTree tree;
  double scale = 1;
};
absl::StatusOr<StarHst> MakeStarHst(const StarFamily& family, double lambda);

struct PolicyOutcome {
  std::vector<double> cost;
  std::vector<double> opt;
  std::vector<double> ratio;
  double mean_ratio = 0;
  double max_ratio = 0;
  // sum(cost) / sum(opt) over trials.
  double expected_ratio = 0;
  // Average per-leaf cost excluding the center, i.e. the empirical left side
  // of the averaged two-point bound.
  double per_leaf_cost = 0;
  double per_leaf_opt = 0;
};

// Each trial samples a client vector with seed DeriveSeed(seed, trial), runs
// the policy and compares with the exact per-leaf optimum. The center
// facility is charged f once in both cost and opt.
absl::StatusOr<PolicyOutcome> EvaluatePolicy(const Policy& policy,
                                             const StarFamily& family,
                                             int trials, uint64_t seed);

}  // namespace dpufl

#endif  // DPUFL_LOWERBOUND_H_
