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

#include "dpufl/hst.h"

#include <algorithm>
#include <numeric>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace dpufl {

absl::StatusOr<HstTree> HstTree::Create(double lambda, int depth,
                                        std::vector<HstVertex> vertices) {
  if (!(lambda > 1)) {
    return absl::InvalidArgumentError("lambda: must be greater than 1");
  }
  if (depth < 1) return absl::InvalidArgumentError("depth: must be at least 1");
  const int n = static_cast<int>(vertices.size());
  if (n == 0) return absl::InvalidArgumentError("vertices: empty tree");

  HstTree tree;
  tree.lambda_ = lambda;
  tree.depth_ = depth;
  tree.children_.assign(n, {});
  int max_level = depth;
  int num_points = 0;
  for (int v = 0; v < n; ++v) {
    const HstVertex& rec = vertices[v];
    if (rec.parent < -1 || rec.parent >= n || rec.parent == v) {
      return absl::InvalidArgumentError(
          absl::StrCat("vertices[", v, "].parent: invalid id ", rec.parent));
    }
    if (rec.level < 0) {
      return absl::InvalidArgumentError(
          absl::StrCat("vertices[", v, "].level: negative"));
    }
    if (rec.point < -1 || rec.point >= n) {
      return absl::InvalidArgumentError(
          absl::StrCat("vertices[", v, "].point: invalid id ", rec.point));
    }
    max_level = std::max(max_level, rec.level);
    num_points = std::max(num_points, rec.point + 1);
    if (rec.parent >= 0) {
      tree.children_[rec.parent].push_back(v);
    } else if (tree.root_ < 0) {
      tree.root_ = v;
    }
  }
  tree.leaf_of_point_.assign(num_points, -1);
  for (int v = 0; v < n; ++v) {
    const PointId p = vertices[v].point;
    if (p >= 0 && tree.leaf_of_point_[p] < 0) tree.leaf_of_point_[p] = v;
  }

  tree.power_.resize(max_level + 2);
  tree.span_.resize(max_level + 2);
  tree.power_[0] = 1;
  tree.span_[0] = 0;
  for (int l = 1; l < static_cast<int>(tree.power_.size()); ++l) {
    tree.power_[l] = tree.power_[l - 1] * lambda;
    tree.span_[l] = tree.span_[l - 1] + tree.power_[l - 1];
  }

  tree.bottom_up_.resize(n);
  std::iota(tree.bottom_up_.begin(), tree.bottom_up_.end(), 0);
  std::stable_sort(tree.bottom_up_.begin(), tree.bottom_up_.end(),
                   [&](VertexId a, VertexId b) {
                     return vertices[a].level < vertices[b].level;
                   });

  tree.vertices_ = std::move(vertices);
  tree.min_leaf_.assign(n, -1);
  // Children sit one level below a valid parent, so the level order visits
  // them first. On malformed trees this is best effort.
  for (VertexId v : tree.bottom_up_) {
    if (tree.children_[v].empty()) {
      if (tree.vertices_[v].point >= 0) tree.min_leaf_[v] = v;
      continue;
    }
    for (VertexId c : tree.children_[v]) {
      const VertexId cand = tree.min_leaf_[c];
      if (cand < 0) continue;
      const VertexId cur = tree.min_leaf_[v];
      if (cur < 0 || tree.vertices_[cand].point < tree.vertices_[cur].point) {
        tree.min_leaf_[v] = cand;
      }
    }
  }
  return tree;
}

std::vector<VertexId> HstTree::Leaves() const {
  std::vector<VertexId> leaves;
  for (VertexId v = 0; v < num_vertices(); ++v) {
    if (is_leaf(v)) leaves.push_back(v);
  }
  return leaves;
}

bool HstTree::IsAncestorOrSelf(VertexId a, VertexId v) const {
  while (v >= 0 && level(v) <= level(a)) {
    if (v == a) return true;
    v = parent(v);
  }
  return false;
}

std::vector<HstViolation> ValidateHst(const HstTree& tree) {
  using Kind = HstViolation::Kind;
  std::vector<HstViolation> report;
  auto add = [&report](Kind kind, VertexId v, std::string message) {
    report.push_back({kind, v, std::move(message)});
  };
  const int n = tree.num_vertices();
  const int depth = tree.depth();

  int roots = 0;
  for (VertexId v = 0; v < n; ++v) {
    const int l = tree.level(v);
    if (l > depth) {
      add(Kind::kLevel, v, absl::StrCat("level ", l, " exceeds depth ", depth));
    }
    const VertexId p = tree.parent(v);
    if (p < 0) {
      ++roots;
      if (l != depth) {
        add(Kind::kRoot, v,
            absl::StrCat("root level ", l, " differs from depth ", depth));
      }
    } else if (tree.level(p) != l + 1) {
      add(Kind::kLevel, v,
          absl::StrCat("parent level ", tree.level(p), " != level ", l, " + 1"));
    }
    if (tree.is_leaf(v)) {
      if (l != 0) {
        add(Kind::kPathLength, v,
            absl::StrCat("leaf at level ", l, ": root-to-leaf path has ",
                         depth - l, " edges, expected ", depth));
      }
      if (tree.point(v) < 0) add(Kind::kPoint, v, "leaf without point");
    } else if (tree.point(v) >= 0) {
      add(Kind::kPoint, v, "internal vertex carries a point");
    }
  }
  if (roots != 1) {
    add(Kind::kRoot, -1, absl::StrCat("expected one root, found ", roots));
  }

  // Every vertex must reach the root without revisiting a vertex.
  std::vector<int> state(n, 0);  // 0 unknown, 1 on stack, 2 reaches root
  for (VertexId v = 0; v < n; ++v) {
    std::vector<VertexId> path;
    VertexId u = v;
    bool bad = false;
    while (u >= 0 && state[u] != 2) {
      if (state[u] == 1) {
        bad = true;
        break;
      }
      state[u] = 1;
      path.push_back(u);
      u = tree.parent(u);
    }
    for (VertexId w : path) state[w] = 2;
    if (bad) add(Kind::kLink, v, "parent links contain a cycle");
  }

  std::vector<int> seen(tree.num_points(), 0);
  for (VertexId v = 0; v < n; ++v) {
    if (tree.point(v) >= 0) ++seen[tree.point(v)];
  }
  for (PointId p = 0; p < tree.num_points(); ++p) {
    if (seen[p] != 1) {
      add(Kind::kPoint, -1,
          absl::StrCat("point ", p, " held by ", seen[p], " leaves"));
    }
  }
  return report;
}

VertexId Lca(const HstTree& tree, VertexId u, VertexId v) {
  while (u != v) {
    if (tree.level(u) < tree.level(v)) {
      u = tree.parent(u);
    } else if (tree.level(v) < tree.level(u)) {
      v = tree.parent(v);
    } else {
      u = tree.parent(u);
      v = tree.parent(v);
    }
    if (u < 0 || v < 0) return -1;
  }
  return u;
}

double TreeDistance(const HstTree& tree, VertexId u, VertexId v) {
  if (u == v) return 0;
  const VertexId a = Lca(tree, u, v);
  const int m = tree.level(a);
  return (tree.Span(m) - tree.Span(tree.level(u))) +
         (tree.Span(m) - tree.Span(tree.level(v)));
}

SubtreeCounts ComputeSubtreeCounts(const HstTree& tree,
                                   std::span<const int64_t> clients) {
  SubtreeCounts counts(tree.num_vertices(), 0);
  for (VertexId v : tree.BottomUpOrder()) {
    const PointId p = tree.point(v);
    if (p >= 0 && p < static_cast<PointId>(clients.size())) {
      counts[v] += clients[p];
    }
    if (tree.parent(v) >= 0) counts[tree.parent(v)] += counts[v];
  }
  return counts;
}

std::vector<VertexId> MinSet(const HstTree& tree,
                             const std::vector<bool>& marked) {
  const int n = tree.num_vertices();
  std::vector<bool> below(n, false);  // T_v \ {v} holds a marked vertex
  std::vector<VertexId> result;
  for (VertexId v : tree.BottomUpOrder()) {
    if (marked[v] && !below[v]) result.push_back(v);
    const VertexId p = tree.parent(v);
    if (p >= 0 && (marked[v] || below[v])) below[p] = true;
  }
  std::sort(result.begin(), result.end());
  return result;
}

std::vector<VertexId> MinSet(const HstTree& tree,
                             std::span<const VertexId> marked) {
  std::vector<bool> mask(tree.num_vertices(), false);
  for (VertexId v : marked) mask[v] = true;
  return MinSet(tree, mask);
}

absl::StatusOr<MinSetChange> ClassifyMinSetChange(
    const HstTree& tree, std::span<const VertexId> marked, VertexId v) {
  std::vector<bool> mask(tree.num_vertices(), false);
  for (VertexId u : marked) mask[u] = true;
  if (mask[v]) {
    return absl::InvalidArgumentError(
        absl::StrCat("vertex ", v, " already in the marked set"));
  }
  const std::vector<VertexId> current = MinSet(tree, mask);
  std::vector<bool> in_min(tree.num_vertices(), false);
  for (VertexId u : current) in_min[u] = true;

  for (VertexId a = tree.parent(v); a >= 0; a = tree.parent(a)) {
    if (in_min[a]) return MinSetChange{MinSetChange::Kind::kReplaced, a};
  }
  for (VertexId u : current) {
    if (tree.IsAncestorOrSelf(v, u)) {
      return MinSetChange{MinSetChange::Kind::kUnchanged, -1};
    }
  }
  return MinSetChange{MinSetChange::Kind::kAdded, -1};
}

bool IsAntichain(const HstTree& tree, std::span<const VertexId> vertices) {
  std::vector<bool> in_set(tree.num_vertices(), false);
  for (VertexId v : vertices) {
    if (in_set[v]) return false;
    in_set[v] = true;
  }
  for (VertexId v : vertices) {
    for (VertexId a = tree.parent(v); a >= 0; a = tree.parent(a)) {
      if (in_set[a]) return false;
    }
  }
  return true;
}

double BValue(const HstTree& tree, const SubtreeCounts& counts,
              double facility_cost, VertexId v) {
  return std::min(facility_cost,
                  static_cast<double>(counts[v]) * tree.Power(tree.level(v)));
}

absl::StatusOr<double> AntichainLowerBound(
    const HstTree& tree, const SubtreeCounts& counts, double facility_cost,
    std::span<const VertexId> vertices) {
  if (!IsAntichain(tree, vertices)) {
    return absl::InvalidArgumentError(
        "antichain_lower_bound: input contains an ancestor-descendant pair");
  }
  double total = 0;
  for (VertexId v : vertices) total += BValue(tree, counts, facility_cost, v);
  return total;
}

absl::StatusOr<HstTree> ExtendRoot(const HstTree& tree, int target_depth) {
  if (target_depth < tree.depth()) {
    return absl::InvalidArgumentError(
        absl::StrCat("extend_root: target depth ", target_depth,
                     " below current depth ", tree.depth()));
  }
  if (target_depth == tree.depth()) return tree;
  std::vector<HstVertex> vertices = tree.vertices();
  VertexId top = tree.root();
  for (int l = tree.depth() + 1; l <= target_depth; ++l) {
    const VertexId id = static_cast<VertexId>(vertices.size());
    vertices.push_back({l, -1, -1});
    vertices[top].parent = id;
    top = id;
  }
  return HstTree::Create(tree.lambda(), target_depth, std::move(vertices));
}

VertexId CanonicalLeaf(const HstTree& tree, VertexId u) {
  return tree.MinLeaf(u);
}

DistanceFn PointToVertexDistance(const HstTree& tree) {
  return [&tree](int p, int v) { return TreeDistance(tree, tree.leaf(p), v); };
}

}  // namespace dpufl
