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

#include "dpufl/oracle.h"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "dpufl/status_macros.h"

namespace dpufl {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<int> MaskToSet(uint32_t mask) {
  std::vector<int> set;
  for (int i = 0; mask != 0; ++i, mask >>= 1) {
    if (mask & 1) set.push_back(i);
  }
  return set;
}

}  // namespace

absl::StatusOr<OptResult> OptExhaustive(std::span<const int64_t> clients,
                                        double facility_cost,
                                        int num_candidates,
                                        const DistanceFn& d,
                                        std::span<const int> forced) {
  if (num_candidates > kMaxExhaustiveCandidates) {
    return absl::InvalidArgumentError(absl::StrCat(
        "opt_exhaustive: ", num_candidates, " candidates exceeds the limit of ",
        kMaxExhaustiveCandidates, "; use opt_tree_dp on tree metrics"));
  }
  if (num_candidates < 1) {
    return absl::InvalidArgumentError("opt_exhaustive: no candidates");
  }
  uint32_t forced_mask = 0;
  for (int s : forced) {
    if (s < 0 || s >= num_candidates) {
      return absl::InvalidArgumentError("opt_exhaustive: forced id out of range");
    }
    forced_mask |= 1u << s;
  }
  bool any_clients = false;
  for (int64_t c : clients) any_clients |= c > 0;
  if (!any_clients) {
    return OptResult{static_cast<double>(std::popcount(forced_mask)) *
                         facility_cost,
                     MaskToSet(forced_mask)};
  }

  const size_t num_masks = size_t{1} << num_candidates;
  std::vector<double> connection(num_masks, 0.0);
  std::vector<double> nearest(num_masks);
  std::vector<double> dist(num_candidates);
  for (size_t v = 0; v < clients.size(); ++v) {
    if (clients[v] == 0) continue;
    for (int s = 0; s < num_candidates; ++s) dist[s] = d(static_cast<int>(v), s);
    const double weight = static_cast<double>(clients[v]);
    nearest[0] = kInf;
    for (size_t mask = 1; mask < num_masks; ++mask) {
      const int low = std::countr_zero(mask);
      nearest[mask] = std::min(nearest[mask & (mask - 1)], dist[low]);
      connection[mask] += weight * nearest[mask];
    }
  }

  uint32_t best_mask = 0;
  double best = kInf;
  std::vector<int> best_set;
  for (size_t mask = 1; mask < num_masks; ++mask) {
    if ((mask & forced_mask) != forced_mask) continue;
    const double cost =
        static_cast<double>(std::popcount(mask)) * facility_cost +
        connection[mask];
    if (cost < best) {
      best = cost;
      best_mask = static_cast<uint32_t>(mask);
      best_set.clear();
    } else if (cost == best) {
      if (best_set.empty()) best_set = MaskToSet(best_mask);
      std::vector<int> cand = MaskToSet(static_cast<uint32_t>(mask));
      if (cand < best_set) {
        best_mask = static_cast<uint32_t>(mask);
        best_set = std::move(cand);
      }
    }
  }
  return OptResult{best, MaskToSet(best_mask)};
}

absl::StatusOr<OptResult> OptExhaustive(const UflInstance& instance) {
  return OptExhaustive(instance.clients, instance.facility_cost,
                       instance.size(), instance.metric.AsFunction());
}

absl::StatusOr<OptResult> OptExhaustiveTree(const HstTree& tree,
                                            std::span<const int64_t> clients,
                                            double facility_cost,
                                            FacilitySites sites) {
  if (static_cast<int>(clients.size()) != tree.num_points()) {
    return absl::InvalidArgumentError("clients: size differs from leaf count");
  }
  std::vector<VertexId> candidates;
  for (VertexId v = 0; v < tree.num_vertices(); ++v) {
    if (sites == FacilitySites::kAllVertices || tree.is_leaf(v)) {
      candidates.push_back(v);
    }
  }
  DPUFL_ASSIGN_OR_RETURN(
      OptResult result,
      OptExhaustive(clients, facility_cost, static_cast<int>(candidates.size()),
                    [&](int p, int idx) {
                      return TreeDistance(tree, tree.leaf(p), candidates[idx]);
                    }));
  for (int& s : result.set) s = candidates[s];
  return result;
}

namespace {

// Bottom-up DP over (vertex, outside key). An outside key (j, i) says the
// nearest facility outside T_u is reached by climbing to level j and
// descending to a facility at level i; its distance from a level-k vertex is
// (S_j - S_k) + (S_j - S_i). Key 0 means no outside facility.
class TreeDp {
 public:
  TreeDp(const HstTree& tree, std::span<const int64_t> clients,
         double facility_cost, FacilitySites sites)
      : tree_(tree),
        clients_(clients),
        f_(facility_cost),
        sites_(sites),
        depth_(tree.depth()) {
    key_index_.resize(depth_ + 1);
    key_count_.resize(depth_ + 1);
    for (int k = 0; k <= depth_; ++k) {
      key_index_[k].assign((depth_ + 1) * (depth_ + 1), -1);
      int next = 1;
      for (int j = k + 1; j <= depth_; ++j) {
        for (int i = 0; i <= j; ++i) key_index_[k][Code(j, i)] = next++;
      }
      key_count_[k] = next;
    }
  }

  double Run() {
    const int n = tree_.num_vertices();
    a_.resize(n);
    ale_.resize(n);
    for (VertexId u : tree_.BottomUpOrder()) {
      const int k = tree_.level(u);
      a_[u].assign(key_count_[k], kInf);
      ale_[u].assign(static_cast<size_t>(key_count_[k]) * (k + 1), kInf);
      ForEachKey(k, [&](int code) {
        const int idx = Index(k, code);
        if (tree_.is_leaf(u)) {
          a_[u][idx] = LeafA(u, code);
          ale_[u][idx * (k + 1)] = Allowed(u) ? f_ : kInf;
          return;
        }
        const Options o = Evaluate(u, code);
        double best = std::min(o.open, o.none);
        for (int ip = 0; ip < k; ++ip) best = std::min(best, o.inside[ip]);
        a_[u][idx] = best;
        double suffix = kInf;
        for (int t = k; t >= 0; --t) {
          if (t < k) suffix = std::min(suffix, o.inside[t]);
          ale_[u][idx * (k + 1) + t] = std::min(o.open, suffix);
        }
      });
    }
    return a_[tree_.root()][0];
  }

  // Facilities of an optimal configuration.
  std::vector<VertexId> Trace() {
    std::vector<VertexId> open;
    Trace(tree_.root(), kNone, -1, open);
    std::sort(open.begin(), open.end());
    return open;
  }

 private:
  static constexpr int kNone = -1;

  struct Options {
    double open = kInf;
    double none = kInf;
    std::vector<double> inside;      // indexed by facility level i'
    std::vector<int> inside_code;    // child key used for inside[i']
    std::vector<VertexId> inside_star;
  };

  int Code(int j, int i) const { return j * (depth_ + 1) + i; }
  int Index(int k, int code) const {
    return code == kNone ? 0 : key_index_[k][code];
  }

  template <typename Fn>
  void ForEachKey(int k, Fn fn) const {
    fn(kNone);
    for (int j = k + 1; j <= depth_; ++j) {
      for (int i = 0; i <= j; ++i) fn(Code(j, i));
    }
  }

  double Value(int k, int code) const {
    if (code == kNone) return kInf;
    const int j = code / (depth_ + 1);
    const int i = code % (depth_ + 1);
    return (tree_.Span(j) - tree_.Span(k)) + (tree_.Span(j) - tree_.Span(i));
  }

  bool Allowed(VertexId v) const {
    return sites_ == FacilitySites::kAllVertices || tree_.is_leaf(v);
  }
  bool LevelAllowed(int level) const {
    return sites_ == FacilitySites::kAllVertices || level == 0;
  }

  double LeafConnection(VertexId u, int code) const {
    const int64_t n = clients_[tree_.point(u)];
    if (n == 0) return 0;
    return static_cast<double>(n) * Value(0, code);
  }

  double LeafA(VertexId u, int code) const {
    return std::min(Allowed(u) ? f_ : kInf, LeafConnection(u, code));
  }

  double A(VertexId c, int code) const {
    return a_[c][Index(tree_.level(c), code)];
  }
  double Ale(VertexId c, int code, int t) const {
    const int k = tree_.level(c);
    return ale_[c][Index(k, code) * (k + 1) + t];
  }

  Options Evaluate(VertexId u, int code) const {
    const int k = tree_.level(u);
    const auto kids = tree_.children(u);
    Options o;
    if (Allowed(u)) {
      o.open = f_;
      for (VertexId c : kids) o.open += A(c, Code(k, k));
    }
    o.none = 0;
    for (VertexId c : kids) o.none += A(c, code);
    o.inside.assign(k, kInf);
    o.inside_code.assign(k, kNone);
    o.inside_star.assign(k, -1);
    const double outside = Value(k, code);
    for (int ip = 0; ip < k; ++ip) {
      if (!LevelAllowed(ip)) continue;
      const int m = Code(k, ip);
      const int child_code = outside <= Value(k, m) ? code : m;
      double sum = 0;
      double delta = kInf;
      VertexId star = -1;
      for (VertexId c : kids) {
        const double base = A(c, child_code);
        sum += base;
        const double forced = Ale(c, child_code, ip);
        if (forced < kInf && forced - base < delta) {
          delta = forced - base;
          star = c;
        }
      }
      if (star < 0) continue;
      o.inside[ip] = sum + delta;
      o.inside_code[ip] = child_code;
      o.inside_star[ip] = star;
    }
    return o;
  }

  void Trace(VertexId u, int code, int threshold, std::vector<VertexId>& open) {
    const int k = tree_.level(u);
    if (tree_.is_leaf(u)) {
      const bool must = threshold >= 0;
      if (must || (Allowed(u) && f_ < LeafConnection(u, code))) open.push_back(u);
      return;
    }
    const double target = threshold < 0 ? A(u, code) : Ale(u, code, threshold);
    const Options o = Evaluate(u, code);
    const auto kids = tree_.children(u);
    if (o.open == target) {
      open.push_back(u);
      for (VertexId c : kids) Trace(c, Code(k, k), -1, open);
      return;
    }
    for (int ip = std::max(threshold, 0); ip < k; ++ip) {
      if (o.inside[ip] != target) continue;
      for (VertexId c : kids) {
        Trace(c, o.inside_code[ip], c == o.inside_star[ip] ? ip : -1, open);
      }
      return;
    }
    for (VertexId c : kids) Trace(c, code, -1, open);
  }

  const HstTree& tree_;
  std::span<const int64_t> clients_;
  double f_;
  FacilitySites sites_;
  int depth_;
  std::vector<std::vector<int>> key_index_;
  std::vector<int> key_count_;
  std::vector<std::vector<double>> a_;
  std::vector<std::vector<double>> ale_;
};

}  // namespace

absl::StatusOr<OptResult> OptTreeDp(const HstTree& tree,
                                    std::span<const int64_t> clients,
                                    double facility_cost, FacilitySites sites) {
  const auto violations = ValidateHst(tree);
  if (!violations.empty()) {
    return absl::InvalidArgumentError(
        absl::StrCat("tree: ", violations.front().message));
  }
  if (static_cast<int>(clients.size()) != tree.num_points()) {
    return absl::InvalidArgumentError("clients: size differs from leaf count");
  }
  TreeDp dp(tree, clients, facility_cost, sites);
  dp.Run();
  OptResult result;
  result.set = dp.Trace();
  DPUFL_ASSIGN_OR_RETURN(const CostBreakdown cost,
                         EvalCost(clients, facility_cost, result.set,
                                  PointToVertexDistance(tree)));
  result.cost = cost.total;
  return result;
}

absl::StatusOr<double> ApproxRatio(double cost, double opt) {
  if (cost < 0 || opt < 0) {
    return absl::InvalidArgumentError("approx_ratio: negative input");
  }
  if (opt == 0) {
    return cost == 0 ? 1.0 : std::numeric_limits<double>::infinity();
  }
  return cost / opt;
}

}  // namespace dpufl
