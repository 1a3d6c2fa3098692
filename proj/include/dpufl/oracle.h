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

#ifndef DPUFL_ORACLE_H_
#define DPUFL_ORACLE_H_

#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "dpufl/hst.h"
#include "dpufl/instance.h"

namespace dpufl {

struct OptResult {
  double cost = 0;
  // Point ids, or vertex ids for the tree variants. Sorted.
  std::vector<int> set;
};

inline constexpr int kMaxExhaustiveCandidates = 20;

// Exact minimum over all facility subsets of the candidates
// 0..num_candidates-1 (the empty set only when there are no clients), where
// d(location, candidate). Ties go to the lexicographically smallest set.
// Candidates in `forced` are always open.
absl::StatusOr<OptResult> OptExhaustive(std::span<const int64_t> clients,
                                        double facility_cost,
                                        int num_candidates,
                                        const DistanceFn& d,
                                        std::span<const int> forced = {});
absl::StatusOr<OptResult> OptExhaustive(const UflInstance& instance);

enum class FacilitySites { kAllVertices, kLeavesOnly };

// Exhaustive search on the tree metric over vertex ids.
absl::StatusOr<OptResult> OptExhaustiveTree(const HstTree& tree,
                                            std::span<const int64_t> clients,
                                            double facility_cost,
                                            FacilitySites sites);

// Exact optimum on the tree metric by a bottom-up DP whose state is the
// (meeting level, facility level) pair describing the nearest facility
// outside the subtree.
absl::StatusOr<OptResult> OptTreeDp(
    const HstTree& tree, std::span<const int64_t> clients,
    double facility_cost, FacilitySites sites = FacilitySites::kAllVertices);

// cost / opt; 1 when both are 0 and +infinity when only opt is 0.
absl::StatusOr<double> ApproxRatio(double cost, double opt);

}  // namespace dpufl

#endif  // DPUFL_ORACLE_H_
