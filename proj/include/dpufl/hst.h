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

#ifndef DPUFL_HST_H_
#define DPUFL_HST_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "dpufl/instance.h"

namespace dpufl {

using VertexId = int;

// Raw vertex record as stored in the tree document.
struct HstVertex {
  int level = 0;
  VertexId parent = -1;
  PointId point = -1;

  bool operator==(const HstVertex&) const = default;
};

// Rooted, leveled tree realizing a lambda-HST. Edge weights are never stored:
// the edge between levels l and l+1 weighs lambda^l. Construction checks only
// that links are in range; ValidateHst reports structural violations.
class HstTree {
 public:
  HstTree() = default;

  static absl::StatusOr<HstTree> Create(double lambda, int depth,
                                        std::vector<HstVertex> vertices);

  double lambda() const { return lambda_; }
  int depth() const { return depth_; }
  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_points() const { return static_cast<int>(leaf_of_point_.size()); }
  VertexId root() const { return root_; }

  int level(VertexId v) const { return vertices_[v].level; }
  VertexId parent(VertexId v) const { return vertices_[v].parent; }
  PointId point(VertexId v) const { return vertices_[v].point; }
  std::span<const VertexId> children(VertexId v) const { return children_[v]; }
  bool is_leaf(VertexId v) const { return children_[v].empty(); }
  // Leaf holding point p, or -1.
  VertexId leaf(PointId p) const { return leaf_of_point_[p]; }
  const std::vector<HstVertex>& vertices() const { return vertices_; }
  std::vector<VertexId> Leaves() const;

  // lambda^l, computed by repeated multiplication.
  double Power(int l) const { return power_[l]; }
  // sum_{i < l} lambda^i: distance from a level-l vertex down to any leaf
  // below it.
  double Span(int l) const { return span_[l]; }

  // Vertices ordered by increasing level, ties by id.
  std::span<const VertexId> BottomUpOrder() const { return bottom_up_; }

  // True iff a is v or a proper ancestor of v.
  bool IsAncestorOrSelf(VertexId a, VertexId v) const;
  // Leaf in T_u with the smallest point id, or -1 if T_u has no leaf point.
  VertexId MinLeaf(VertexId u) const { return min_leaf_[u]; }

  bool operator==(const HstTree& other) const {
    return lambda_ == other.lambda_ && depth_ == other.depth_ &&
           vertices_ == other.vertices_;
  }

 private:
  double lambda_ = 2;
  int depth_ = 1;
  VertexId root_ = -1;
  std::vector<HstVertex> vertices_;
  std::vector<std::vector<VertexId>> children_;
  std::vector<VertexId> leaf_of_point_;
  std::vector<VertexId> bottom_up_;
  std::vector<VertexId> min_leaf_;
  std::vector<double> power_;
  std::vector<double> span_;
};

struct HstViolation {
  enum class Kind {
    kParameter,   // lambda <= 1 or depth < 1
    kRoot,        // zero or several roots, or root level != depth
    kLevel,       // level outside [0, depth] or parent level != level + 1
    kPathLength,  // leaf not at level 0
    kLink,        // cycle or unreachable vertex
    kPoint,       // leaf without point, internal with point, or bad bijection
  };
  Kind kind;
  VertexId vertex = -1;
  std::string message;
};

std::vector<HstViolation> ValidateHst(const HstTree& tree);

// Total weight of the u-v path.
double TreeDistance(const HstTree& tree, VertexId u, VertexId v);

// Lowest common ancestor.
VertexId Lca(const HstTree& tree, VertexId u, VertexId v);

// Per-vertex client totals N_u; leaves take clients[point].
using SubtreeCounts = std::vector<int64_t>;
SubtreeCounts ComputeSubtreeCounts(const HstTree& tree,
                                   std::span<const int64_t> clients);

// Members of `marked` with no proper descendant in `marked`. One bottom-up
// pass; output sorted by id.
std::vector<VertexId> MinSet(const HstTree& tree,
                             const std::vector<bool>& marked);
std::vector<VertexId> MinSet(const HstTree& tree,
                             std::span<const VertexId> marked);

// How min_set(M + {v}) differs from min_set(M) for v not in M.
struct MinSetChange {
  enum class Kind { kUnchanged, kAdded, kReplaced };
  Kind kind;
  VertexId replaced = -1;  // The ancestor of v dropped, for kReplaced.

  bool operator==(const MinSetChange&) const = default;
};
absl::StatusOr<MinSetChange> ClassifyMinSetChange(
    const HstTree& tree, std::span<const VertexId> marked, VertexId v);

bool IsAntichain(const HstTree& tree, std::span<const VertexId> vertices);

// min(f, N_v * lambda^{level(v)}).
double BValue(const HstTree& tree, const SubtreeCounts& counts,
              double facility_cost, VertexId v);

// Sum of B_v over an antichain; errors if `vertices` holds an
// ancestor-descendant pair.
absl::StatusOr<double> AntichainLowerBound(const HstTree& tree,
                                           const SubtreeCounts& counts,
                                           double facility_cost,
                                           std::span<const VertexId> vertices);

// Adds roots above the current root until depth == target_depth. Existing
// vertex ids are unchanged; new roots get the next ids.
absl::StatusOr<HstTree> ExtendRoot(const HstTree& tree, int target_depth);

// Leaf of T_u with the smallest point id; u itself for a leaf.
VertexId CanonicalLeaf(const HstTree& tree, VertexId u);

// Distance function over vertex ids, for EvalCost and the oracles. Client
// locations are given as point ids and mapped to their leaves.
DistanceFn PointToVertexDistance(const HstTree& tree);

}  // namespace dpufl

#endif  // DPUFL_HST_H_
