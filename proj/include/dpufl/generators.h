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

#ifndef DPUFL_GENERATORS_H_
#define DPUFL_GENERATORS_H_

#include <cstdint>

#include "absl/status/statusor.h"
#include "dpufl/hst.h"
#include "dpufl/instance.h"
#include "dpufl/random.h"

namespace dpufl {

// Random lambda-HST of the given depth with one leaf per point. Every
// internal vertex splits its points into 1 to `max_branching` groups, and
// level-1 vertices split into singletons.
absl::StatusOr<HstTree> RandomHst(int num_points, int depth, double lambda,
                                  Rng& rng, int max_branching = 3);

// n points uniform in [0, side)^dim under the Euclidean metric.
absl::StatusOr<Metric> RandomEuclideanMetric(int n, int dim, double side,
                                             Rng& rng);

// Independent counts uniform in [0, max_clients].
ClientVector RandomClients(int n, int64_t max_clients, Rng& rng);

}  // namespace dpufl

#endif  // DPUFL_GENERATORS_H_
