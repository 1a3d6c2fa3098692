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

#ifndef DPUFL_INSTANCE_H_
#define DPUFL_INSTANCE_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"

namespace dpufl {

// Index of a location in [0, n).
using PointId = int;

// Clients per location.
using ClientVector = std::vector<int64_t>;

// Distance between a client location and a facility candidate. Candidates are
// points for general metrics and tree vertices for HST metrics.
using DistanceFn = std::function<double(int, int)>;

// Dense n x n distance table. Construction only checks the shape; use
// ValidateMetric for the metric axioms.
class Metric {
 public:
  Metric() = default;

  static absl::StatusOr<Metric> FromTable(
      const std::vector<std::vector<double>>& table);
  static absl::StatusOr<Metric> FromEuclidean(
      const std::vector<std::vector<double>>& coords);

  int size() const { return n_; }
  double operator()(PointId u, PointId v) const { return dist_[u * n_ + v]; }

  // Largest pairwise distance (0 for n <= 1).
  double Diameter() const;
  // Smallest strictly positive distance, or 0 if there is none.
  double MinNonzero() const;

  Metric Scaled(double factor) const;
  std::vector<std::vector<double>> ToTable() const;
  DistanceFn AsFunction() const;

  bool operator==(const Metric&) const = default;

 private:
  Metric(int n, std::vector<double> dist) : n_(n), dist_(std::move(dist)) {}

  int n_ = 0;
  std::vector<double> dist_;
};

struct MetricViolation {
  enum class Kind { kNegative, kDiagonal, kSymmetry, kTriangle };
  Kind kind;
  PointId i = -1;
  PointId j = -1;
  PointId k = -1;  // Only for kTriangle: d(i,k) > d(i,j) + d(j,k).

  std::string ToString() const;
};

// Absolute tolerance used by triangle and symmetry checks.
inline constexpr double kMetricTolerance = 1e-9;

// Empty iff the table has a zero diagonal, is symmetric, nonnegative and
// satisfies the triangle inequality up to kMetricTolerance.
std::vector<MetricViolation> ValidateMetric(const Metric& metric);

struct UflInstance {
  Metric metric;
  double facility_cost = 0;
  ClientVector clients;

  static absl::StatusOr<UflInstance> Create(Metric metric, double facility_cost,
                                            ClientVector clients);

  int size() const { return metric.size(); }
  int64_t TotalClients() const;

  bool operator==(const UflInstance&) const = default;
};

struct CostBreakdown {
  double facility = 0;
  double connection = 0;
  double total = 0;

  bool operator==(const CostBreakdown&) const = default;
};

// |open| * facility_cost + sum_v clients[v] * min_{s in open} d(v, s).
// Fails with "no facility reachable" when open is empty but clients exist.
absl::StatusOr<CostBreakdown> EvalCost(std::span<const int64_t> clients,
                                       double facility_cost,
                                       std::span<const int> open,
                                       const DistanceFn& d);
absl::StatusOr<CostBreakdown> EvalCost(const UflInstance& instance,
                                       std::span<const PointId> open);

// argmin over candidates of d(v, .), ties to the smallest id.
absl::StatusOr<int> NearestInSet(const DistanceFn& d, int v,
                                 std::span<const int> candidates);

}  // namespace dpufl

#endif  // DPUFL_INSTANCE_H_
