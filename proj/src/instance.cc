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

#include "dpufl/instance.h"

#include <cmath>
#include <limits>
#include <sstream>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace dpufl {

absl::StatusOr<Metric> Metric::FromTable(
    const std::vector<std::vector<double>>& table) {
  const int n = static_cast<int>(table.size());
  std::vector<double> dist;
  dist.reserve(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(table[i].size()) != n) {
      return absl::InvalidArgumentError(
          absl::StrCat("distances[", i, "]: expected ", n, " entries, got ",
                       table[i].size()));
    }
    for (int j = 0; j < n; ++j) {
      if (!std::isfinite(table[i][j])) {
        return absl::InvalidArgumentError(
            absl::StrCat("distances[", i, "][", j, "]: not finite"));
      }
      dist.push_back(table[i][j]);
    }
  }
  return Metric(n, std::move(dist));
}

absl::StatusOr<Metric> Metric::FromEuclidean(
    const std::vector<std::vector<double>>& coords) {
  const int n = static_cast<int>(coords.size());
  const size_t dim = n > 0 ? coords[0].size() : 0;
  std::vector<double> dist(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    if (coords[i].size() != dim) {
      return absl::InvalidArgumentError(absl::StrCat(
          "coords[", i, "]: expected dimension ", dim, ", got ",
          coords[i].size()));
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double sq = 0;
      for (size_t k = 0; k < dim; ++k) {
        const double diff = coords[i][k] - coords[j][k];
        sq += diff * diff;
      }
      dist[i * n + j] = dist[j * n + i] = std::sqrt(sq);
    }
  }
  return Metric(n, std::move(dist));
}

double Metric::Diameter() const {
  double best = 0;
  for (double d : dist_) best = std::max(best, d);
  return best;
}

double Metric::MinNonzero() const {
  double best = std::numeric_limits<double>::infinity();
  for (double d : dist_) {
    if (d > 0) best = std::min(best, d);
  }
  return std::isinf(best) ? 0.0 : best;
}

Metric Metric::Scaled(double factor) const {
  std::vector<double> dist = dist_;
  for (double& d : dist) d *= factor;
  return Metric(n_, std::move(dist));
}

std::vector<std::vector<double>> Metric::ToTable() const {
  std::vector<std::vector<double>> table(n_, std::vector<double>(n_));
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) table[i][j] = (*this)(i, j);
  }
  return table;
}

DistanceFn Metric::AsFunction() const {
  return [metric = *this](int u, int v) { return metric(u, v); };
}

std::string MetricViolation::ToString() const {
  switch (kind) {
    case Kind::kNegative:
      return absl::StrCat("negative distance at (", i, ",", j, ")");
    case Kind::kDiagonal:
      return absl::StrCat("nonzero diagonal at (", i, ",", i, ")");
    case Kind::kSymmetry:
      return absl::StrCat("symmetry violation at (", i, ",", j, ")");
    case Kind::kTriangle:
      return absl::StrCat("triangle violation (", i, ",", j, ",", k, ")");
  }
  return "unknown violation";
}

std::vector<MetricViolation> ValidateMetric(const Metric& metric) {
  using Kind = MetricViolation::Kind;
  std::vector<MetricViolation> report;
  const int n = metric.size();
  for (int i = 0; i < n; ++i) {
    if (metric(i, i) != 0) report.push_back({Kind::kDiagonal, i, i});
    for (int j = 0; j < n; ++j) {
      if (metric(i, j) < 0) report.push_back({Kind::kNegative, i, j});
      if (i < j && std::abs(metric(i, j) - metric(j, i)) > kMetricTolerance) {
        report.push_back({Kind::kSymmetry, i, j});
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      for (int j = 0; j < n; ++j) {
        if (metric(i, k) > metric(i, j) + metric(j, k) + kMetricTolerance) {
          report.push_back({Kind::kTriangle, i, j, k});
        }
      }
    }
  }
  return report;
}

absl::StatusOr<UflInstance> UflInstance::Create(Metric metric,
                                                double facility_cost,
                                                ClientVector clients) {
  if (!(facility_cost > 0) || !std::isfinite(facility_cost)) {
    return absl::InvalidArgumentError(
        "facility_cost: must be a positive finite number");
  }
  if (static_cast<int>(clients.size()) != metric.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("clients: expected ", metric.size(), " entries, got ",
                     clients.size()));
  }
  int64_t total = 0;
  for (size_t i = 0; i < clients.size(); ++i) {
    if (clients[i] < 0) {
      return absl::InvalidArgumentError(
          absl::StrCat("clients[", i, "]: negative count ", clients[i]));
    }
    if (clients[i] > (int64_t{1} << 53) - total) {
      return absl::InvalidArgumentError("clients: total exceeds 2^53");
    }
    total += clients[i];
  }
  UflInstance instance;
  instance.metric = std::move(metric);
  instance.facility_cost = facility_cost;
  instance.clients = std::move(clients);
  return instance;
}

int64_t UflInstance::TotalClients() const {
  int64_t total = 0;
  for (int64_t c : clients) total += c;
  return total;
}

absl::StatusOr<CostBreakdown> EvalCost(std::span<const int64_t> clients,
                                       double facility_cost,
                                       std::span<const int> open,
                                       const DistanceFn& d) {
  CostBreakdown cost;
  cost.facility = static_cast<double>(open.size()) * facility_cost;
  for (size_t v = 0; v < clients.size(); ++v) {
    if (clients[v] == 0) continue;
    if (open.empty()) return absl::FailedPreconditionError("no facility reachable");
    double best = std::numeric_limits<double>::infinity();
    for (int s : open) best = std::min(best, d(static_cast<int>(v), s));
    cost.connection += static_cast<double>(clients[v]) * best;
  }
  cost.total = cost.facility + cost.connection;
  return cost;
}

absl::StatusOr<CostBreakdown> EvalCost(const UflInstance& instance,
                                       std::span<const PointId> open) {
  for (PointId s : open) {
    if (s < 0 || s >= instance.size()) {
      return absl::InvalidArgumentError(
          absl::StrCat("open set: point ", s, " out of range"));
    }
  }
  return EvalCost(instance.clients, instance.facility_cost, open,
                  instance.metric.AsFunction());
}

absl::StatusOr<int> NearestInSet(const DistanceFn& d, int v,
                                 std::span<const int> candidates) {
  if (candidates.empty()) {
    return absl::InvalidArgumentError("nearest_in_set: empty candidate set");
  }
  int best = -1;
  double best_d = std::numeric_limits<double>::infinity();
  for (int s : candidates) {
    const double dist = d(v, s);
    if (dist < best_d || (dist == best_d && s < best)) {
      best = s;
      best_d = dist;
    }
  }
  return best;
}

}  // namespace dpufl
