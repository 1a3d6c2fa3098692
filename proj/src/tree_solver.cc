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

#include "dpufl/tree_solver.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "dpufl/status_macros.h"

namespace dpufl {

int ComputeLPrime(double facility_cost, double epsilon, double lambda) {
  const double target = epsilon * facility_cost;
  int level = 0;
  double power = 1;
  while (power < target) {
    power *= lambda;
    ++level;
  }
  return level;
}

absl::StatusOr<SolverParams> SolverParams::Create(double epsilon,
                                                  double facility_cost,
                                                  double lambda) {
  if (!(epsilon > 0) || !std::isfinite(epsilon)) {
    return absl::InvalidArgumentError("epsilon: must be positive and finite");
  }
  if (!(facility_cost > 0) || !std::isfinite(facility_cost)) {
    return absl::InvalidArgumentError(
        "facility_cost: must be positive and finite");
  }
  if (!(lambda > 1) || lambda > 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("lambda: must lie in (1, 2], got ", lambda));
  }
  SolverParams p;
  p.epsilon = epsilon;
  p.facility_cost = facility_cost;
  p.lambda = lambda;
  p.eta = std::sqrt(lambda);
  p.c = (p.eta - 1) / (p.eta * p.eta);
  p.l_prime = ComputeLPrime(facility_cost, epsilon, lambda);
  return p;
}

absl::StatusOr<double> LaplaceScale(int level, const SolverParams& params) {
  if (level < 0 || level >= params.l_prime) {
    return absl::InvalidArgumentError(absl::StrCat(
        "laplace_scale: level ", level, " is not below L' = ", params.l_prime));
  }
  return params.facility_cost /
         (params.c * std::pow(params.eta, params.l_prime + level));
}

double LaplaceFromUniform(double scale, double u) {
  if (u == 0) return 0;
  const double sign = u < 0 ? -1.0 : 1.0;
  return -scale * sign * std::log1p(-2 * std::abs(u));
}

double SampleLaplace(double scale, Rng& rng) {
  double w = rng.Uniform01();
  while (w == 0) w = rng.Uniform01();
  return LaplaceFromUniform(scale, w - 0.5);
}

std::vector<VertexId> MarkedSet::Members() const {
  std::vector<VertexId> members;
  for (size_t v = 0; v < marked.size(); ++v) {
    if (marked[v]) members.push_back(static_cast<VertexId>(v));
  }
  return members;
}

MarkedSet MarkBase(const HstTree& tree, const SubtreeCounts& counts,
                   const SolverParams& params) {
  const int n = tree.num_vertices();
  MarkedSet m{std::vector<bool>(n, false),
              std::vector<std::optional<double>>(n)};
  for (VertexId v = 0; v < n; ++v) {
    const int l = tree.level(v);
    m.marked[v] = l >= params.l_prime ||
                  static_cast<double>(counts[v]) * tree.Power(l) >=
                      params.facility_cost;
  }
  return m;
}

MarkedSet MarkNoisy(const HstTree& tree, const SubtreeCounts& counts,
                    const SolverParams& params, Rng& rng) {
  const int n = tree.num_vertices();
  MarkedSet m{std::vector<bool>(n, false),
              std::vector<std::optional<double>>(n)};
  std::vector<double> scales(params.l_prime);
  for (int l = 0; l < params.l_prime; ++l) scales[l] = *LaplaceScale(l, params);
  for (VertexId v = 0; v < n; ++v) {
    const int l = tree.level(v);
    if (l >= params.l_prime) {
      m.marked[v] = true;
      continue;
    }
    const double noisy =
        static_cast<double>(counts[v]) + SampleLaplace(scales[l], rng);
    m.noisy_counts[v] = noisy;
    m.marked[v] = noisy * tree.Power(l) >= params.facility_cost;
  }
  return m;
}

std::vector<VertexId> SelectSuperset(const HstTree& tree,
                                     const MarkedSet& marked) {
  return MinSet(tree, marked.marked);
}

absl::StatusOr<Assignment> ClosestFacilityRule(
    const HstTree& tree, std::span<const int64_t> clients,
    std::span<const VertexId> superset, double facility_cost) {
  if (static_cast<int>(clients.size()) != tree.num_points()) {
    return absl::InvalidArgumentError(
        absl::StrCat("clients: expected ", tree.num_points(), " entries, got ",
                     clients.size()));
  }
  const int n = tree.num_vertices();
  std::vector<bool> in_set(n, false);
  for (VertexId r : superset) in_set[r] = true;

  // best[a]: member of T_a closest to a, i.e. highest level, then smallest id.
  std::vector<VertexId> best(n, -1);
  auto better = [&tree](VertexId x, VertexId y) {
    if (y < 0) return true;
    if (tree.level(x) != tree.level(y)) return tree.level(x) > tree.level(y);
    return x < y;
  };
  for (VertexId v : tree.BottomUpOrder()) {
    if (in_set[v]) best[v] = v;
    const VertexId p = tree.parent(v);
    if (p >= 0 && best[v] >= 0 && better(best[v], best[p])) best[p] = best[v];
  }

  Assignment out;
  out.serving.assign(clients.size(), -1);
  for (PointId p = 0; p < static_cast<PointId>(clients.size()); ++p) {
    if (clients[p] == 0) continue;
    const VertexId leaf = tree.leaf(p);
    VertexId choice = -1;
    double choice_d = std::numeric_limits<double>::infinity();
    for (VertexId a = leaf; a >= 0; a = tree.parent(a)) {
      const VertexId cand = best[a];
      if (cand < 0) continue;
      const int m = tree.level(a);
      const double d = (tree.Span(m) - tree.Span(tree.level(leaf))) +
                       (tree.Span(m) - tree.Span(tree.level(cand)));
      if (d < choice_d || (d == choice_d && cand < choice)) {
        choice = cand;
        choice_d = d;
      }
    }
    if (choice < 0) return absl::FailedPreconditionError("no facility reachable");
    out.serving[p] = choice;
    out.cost.connection += static_cast<double>(clients[p]) * choice_d;
  }
  for (VertexId s : out.serving) {
    if (s >= 0) out.open.push_back(s);
  }
  std::sort(out.open.begin(), out.open.end());
  out.open.erase(std::unique(out.open.begin(), out.open.end()), out.open.end());
  out.cost.facility = static_cast<double>(out.open.size()) * facility_cost;
  out.cost.total = out.cost.facility + out.cost.connection;
  return out;
}

absl::StatusOr<HstTree> PrepareTree(const HstTree& tree,
                                    const SolverParams& params) {
  if (tree.depth() >= params.l_prime) return tree;
  return ExtendRoot(tree, params.l_prime);
}

namespace {

absl::Status CheckTree(const HstTree& tree, std::span<const int64_t> clients) {
  const auto violations = ValidateHst(tree);
  if (!violations.empty()) {
    return absl::InvalidArgumentError(
        absl::StrCat("tree: ", violations.front().message));
  }
  if (static_cast<int>(clients.size()) != tree.num_points()) {
    return absl::InvalidArgumentError(
        absl::StrCat("clients: expected ", tree.num_points(), " entries, got ",
                     clients.size()));
  }
  for (size_t i = 0; i < clients.size(); ++i) {
    if (clients[i] < 0) {
      return absl::InvalidArgumentError(
          absl::StrCat("clients[", i, "]: negative count"));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<Solution> Solve(const HstTree& input,
                               std::span<const int64_t> clients,
                               double facility_cost, double epsilon, Rng* rng,
                               const SolveOptions& options) {
  DPUFL_RETURN_IF_ERROR(CheckTree(input, clients));
  DPUFL_ASSIGN_OR_RETURN(const SolverParams params,
                         SolverParams::Create(epsilon, facility_cost,
                                              input.lambda()));
  DPUFL_ASSIGN_OR_RETURN(const HstTree tree, PrepareTree(input, params));
  const SubtreeCounts counts = ComputeSubtreeCounts(tree, clients);

  Solution sol;
  sol.extended_roots = tree.depth() - input.depth();
  sol.marked = rng != nullptr ? MarkNoisy(tree, counts, params, *rng)
                              : MarkBase(tree, counts, params);
  if (rng != nullptr) sol.seed = rng->seed();
  sol.superset = options.return_all_marked ? sol.marked.Members()
                                           : SelectSuperset(tree, sol.marked);
  DPUFL_ASSIGN_OR_RETURN(
      Assignment assignment,
      ClosestFacilityRule(tree, clients, sol.superset, facility_cost));

  if (options.leaf_only) {
    assignment.open.clear();
    assignment.cost = {};
    for (PointId p = 0; p < static_cast<PointId>(clients.size()); ++p) {
      VertexId& s = assignment.serving[p];
      if (s < 0) continue;
      s = CanonicalLeaf(tree, s);
      assignment.open.push_back(s);
      assignment.cost.connection += static_cast<double>(clients[p]) *
                                    TreeDistance(tree, tree.leaf(p), s);
    }
    auto& open = assignment.open;
    std::sort(open.begin(), open.end());
    open.erase(std::unique(open.begin(), open.end()), open.end());
    assignment.cost.facility = static_cast<double>(open.size()) * facility_cost;
    assignment.cost.total = assignment.cost.facility + assignment.cost.connection;
  }
  sol.open = std::move(assignment.open);
  sol.serving = std::move(assignment.serving);
  sol.cost = assignment.cost;
  return sol;
}

}  // namespace

absl::StatusOr<Solution> SolveTreeBase(const HstTree& tree,
                                       std::span<const int64_t> clients,
                                       double facility_cost, double epsilon,
                                       const SolveOptions& options) {
  return Solve(tree, clients, facility_cost, epsilon, nullptr, options);
}

absl::StatusOr<Solution> SolveTreeDp(const HstTree& tree,
                                     std::span<const int64_t> clients,
                                     double facility_cost, double epsilon,
                                     uint64_t seed,
                                     const SolveOptions& options) {
  Rng rng(seed);
  return Solve(tree, clients, facility_cost, epsilon, &rng, options);
}

}  // namespace dpufl
