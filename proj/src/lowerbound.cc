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

#include "dpufl/lowerbound.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/status/status.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/string_view.h"
#include "dpufl/status_macros.h"
#include "dpufl/tree_solver.h"

namespace dpufl {

absl::StatusOr<StarFamily> StarFamily::Create(int n, double epsilon,
                                              double facility_cost) {
  if (n < 1) return absl::InvalidArgumentError("star: n must be >= 1");
  if (!(epsilon > 0 && epsilon < 1)) {
    return absl::InvalidArgumentError("star: epsilon must lie in (0, 1)");
  }
  if (!(facility_cost > 0) || !std::isfinite(facility_cost)) {
    return absl::InvalidArgumentError("star: facility cost must be positive");
  }
  StarFamily family;
  family.n = n;
  family.epsilon = epsilon;
  family.facility_cost = facility_cost;
  // The slack keeps 1/epsilon that is integral up to rounding from jumping
  // to the next integer.
  family.m = static_cast<int64_t>(std::ceil(1.0 / epsilon - 1e-9));
  family.m = std::max<int64_t>(family.m, 1);
  family.radius = std::sqrt(epsilon) * facility_cost;
  return family;
}

double StarFamily::ProbOne() const {
  const double root_m = std::sqrt(static_cast<double>(m));
  return root_m / (root_m + 1);
}

absl::StatusOr<UflInstance> MakeStarInstance(int n, double epsilon,
                                             double facility_cost) {
  DPUFL_ASSIGN_OR_RETURN(StarFamily family,
                         StarFamily::Create(n, epsilon, facility_cost));
  const int size = n + 1;
  std::vector<std::vector<double>> table(size, std::vector<double>(size, 0));
  for (int i = 0; i < size; ++i) {
    for (int j = 0; j < size; ++j) {
      if (i == j) continue;
      table[i][j] = (i == 0 || j == 0) ? family.radius : 2 * family.radius;
    }
  }
  DPUFL_ASSIGN_OR_RETURN(Metric metric, Metric::FromTable(std::move(table)));
  return UflInstance::Create(std::move(metric), facility_cost,
                             ClientVector(size, 0));
}

ClientVector SampleClientVector(const StarFamily& family, Rng& rng) {
  ClientVector clients(family.n + 1, 0);
  const double p_one = family.ProbOne();
  for (int i = 1; i <= family.n; ++i) {
    clients[i] = rng.Bernoulli(p_one) ? 1 : family.m;
  }
  return clients;
}

TwoPointCostTable MakeTwoPointCostTable(double facility_cost, int64_t m) {
  const double root_m = std::sqrt(static_cast<double>(m));
  return {.one_closed = facility_cost / root_m,
          .one_open = facility_cost,
          .many_closed = root_m * facility_cost,
          .many_open = facility_cost};
}

double ExpectedOptPerLeaf(double facility_cost, int64_t m) {
  return 2 * facility_cost / (std::sqrt(static_cast<double>(m)) + 1);
}

absl::StatusOr<Policy> Policy::Parse(const std::string& name) {
  Policy policy;
  const absl::string_view view(name);
  const size_t colon = view.find(':');
  const absl::string_view head = view.substr(0, colon);
  const absl::string_view arg =
      colon == absl::string_view::npos ? "" : view.substr(colon + 1);
  if (head == "open-all" && colon == absl::string_view::npos) {
    policy.kind = Kind::kOpenAll;
  } else if (head == "open-none" && colon == absl::string_view::npos) {
    policy.kind = Kind::kOpenNone;
  } else if (head == "threshold") {
    policy.kind = Kind::kThreshold;
    if (colon != absl::string_view::npos &&
        (!absl::SimpleAtoi(arg, &policy.threshold) || policy.threshold < 0)) {
      return absl::InvalidArgumentError(
          absl::StrCat("policy: bad threshold '", arg, "'"));
    }
  } else if (head == "dp-solver") {
    policy.kind = Kind::kDpSolver;
    if (colon != absl::string_view::npos &&
        (!absl::SimpleAtod(arg, &policy.epsilon) || !(policy.epsilon > 0))) {
      return absl::InvalidArgumentError(
          absl::StrCat("policy: bad dp-solver epsilon '", arg, "'"));
    }
  } else {
    return absl::InvalidArgumentError(
        absl::StrCat("policy: unknown policy '", name, "'"));
  }
  return policy;
}

std::string Policy::Name() const {
  switch (kind) {
    case Kind::kOpenAll:
      return "open-all";
    case Kind::kOpenNone:
      return "open-none";
    case Kind::kThreshold:
      return threshold > 0 ? absl::StrCat("threshold:", threshold)
                           : "threshold";
    case Kind::kDpSolver:
      return epsilon > 0 ? absl::StrCat("dp-solver:", epsilon) : "dp-solver";
  }
  return "unknown";
}

absl::StatusOr<StarHst> MakeStarHst(const StarFamily& family, double lambda) {
  if (!(lambda > 1)) {
    return absl::InvalidArgumentError("star hst: lambda must exceed 1");
  }
  int depth = 1;
  double span = 1;  // sum_{i < depth} lambda^i
  double power = lambda;
  while (span < family.radius) {
    span += power;
    power *= lambda;
    ++depth;
  }
  std::vector<HstVertex> vertices;
  vertices.reserve(1 + static_cast<size_t>(family.n) * depth);
  vertices.push_back({.level = depth, .parent = -1, .point = -1});
  for (int i = 0; i < family.n; ++i) {
    VertexId parent = 0;
    for (int level = depth - 1; level >= 0; --level) {
      vertices.push_back(
          {.level = level, .parent = parent, .point = level == 0 ? i : -1});
      parent = static_cast<VertexId>(vertices.size()) - 1;
    }
  }
  StarHst out;
  DPUFL_ASSIGN_OR_RETURN(out.tree,
                         HstTree::Create(lambda, depth, std::move(vertices)));
  out.scale = family.radius / out.tree.Span(depth);
  return out;
}

namespace {

// Per-leaf open decisions of the dp-solver policy on the star HST. A leaf
// counts as open when its clients are served inside its own chain.
absl::StatusOr<std::vector<bool>> DpSolverDecisions(
    const Policy& policy, const StarFamily& family, const StarHst& star,
    const ClientVector& clients, uint64_t seed) {
  const double epsilon = policy.epsilon > 0 ? policy.epsilon : family.epsilon;
  const ClientVector leaf_clients(clients.begin() + 1, clients.end());
  DPUFL_ASSIGN_OR_RETURN(
      Solution solution,
      SolveTreeDp(star.tree, leaf_clients, family.facility_cost / star.scale,
                  epsilon, seed));
  DPUFL_ASSIGN_OR_RETURN(
      const HstTree tree,
      ExtendRoot(star.tree, star.tree.depth() + solution.extended_roots));
  const int center_level = star.tree.depth();
  std::vector<bool> open(family.n, false);
  for (PointId i = 0; i < family.n; ++i) {
    const VertexId s = solution.serving[i];
    open[i] = s >= 0 && tree.level(s) < center_level &&
              tree.IsAncestorOrSelf(s, tree.leaf(i));
  }
  return open;
}

}  // namespace

absl::StatusOr<PolicyOutcome> EvaluatePolicy(const Policy& policy,
                                             const StarFamily& family,
                                             int trials, uint64_t seed) {
  if (trials < 1) {
    return absl::InvalidArgumentError("lowerbound: trials must be >= 1");
  }
  std::optional<StarHst> star;
  if (policy.kind == Policy::Kind::kDpSolver) {
    DPUFL_ASSIGN_OR_RETURN(star, MakeStarHst(family, policy.lambda));
  }
  const double f = family.facility_cost;
  const double r = family.radius;
  const int64_t threshold =
      policy.threshold > 0 ? policy.threshold : family.m;

  PolicyOutcome out;
  out.cost.reserve(trials);
  out.opt.reserve(trials);
  out.ratio.reserve(trials);
  double cost_sum = 0;
  double opt_sum = 0;
  double ratio_sum = 0;
  out.max_ratio = -std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    const uint64_t trial_seed = DeriveSeed(seed, static_cast<uint64_t>(t));
    Rng rng(trial_seed);
    const ClientVector clients = SampleClientVector(family, rng);

    std::vector<bool> open(family.n, false);
    switch (policy.kind) {
      case Policy::Kind::kOpenAll:
        open.assign(family.n, true);
        break;
      case Policy::Kind::kOpenNone:
        break;
      case Policy::Kind::kThreshold:
        for (int i = 0; i < family.n; ++i) open[i] = clients[i + 1] >= threshold;
        break;
      case Policy::Kind::kDpSolver: {
        DPUFL_ASSIGN_OR_RETURN(
            open, DpSolverDecisions(policy, family, *star, clients,
                                    DeriveSeed(trial_seed, 1)));
        break;
      }
    }

    double cost = f;
    double opt = f;
    for (int i = 0; i < family.n; ++i) {
      const double closed = static_cast<double>(clients[i + 1]) * r;
      cost += open[i] ? f : closed;
      opt += std::min(f, closed);
    }
    out.cost.push_back(cost);
    out.opt.push_back(opt);
    out.ratio.push_back(cost / opt);
    cost_sum += cost;
    opt_sum += opt;
    ratio_sum += cost / opt;
    out.max_ratio = std::max(out.max_ratio, cost / opt);
  }
  out.mean_ratio = ratio_sum / trials;
  out.expected_ratio = cost_sum / opt_sum;
  const double leaf_trials = static_cast<double>(trials) * family.n;
  out.per_leaf_cost = (cost_sum - f * trials) / leaf_trials;
  out.per_leaf_opt = (opt_sum - f * trials) / leaf_trials;
  return out;
}

}  // namespace dpufl
