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

#include "dpufl/generators.h"

#include <algorithm>
#include <vector>

#include "absl/status/status.h"

namespace dpufl {

absl::StatusOr<HstTree> RandomHst(int num_points, int depth, double lambda,
                                  Rng& rng, int max_branching) {
  if (num_points < 1) {
    return absl::InvalidArgumentError("random hst: need at least one point");
  }
  if (depth < 1) return absl::InvalidArgumentError("random hst: depth < 1");
  if (max_branching < 1) {
    return absl::InvalidArgumentError("random hst: max_branching < 1");
  }
  std::vector<PointId> order(num_points);
  for (int i = 0; i < num_points; ++i) order[i] = i;
  for (int i = num_points - 1; i > 0; --i) {
    std::swap(order[i], order[rng.UniformInt(i + 1)]);
  }

  struct Group {
    VertexId vertex;
    int begin;
    int end;
  };
  std::vector<HstVertex> vertices{{.level = depth, .parent = -1, .point = -1}};
  std::vector<Group> frontier{{0, 0, num_points}};
  for (int level = depth - 1; level >= 0; --level) {
    std::vector<Group> next;
    for (const Group& g : frontier) {
      const int size = g.end - g.begin;
      int parts = size;
      if (level > 0) {
        parts = 1 + static_cast<int>(
                        rng.UniformInt(std::min(size, max_branching)));
      }
      // Distinct cut points chosen uniformly among the size - 1 gaps.
      std::vector<int> cuts;
      std::vector<int> gaps(size - 1);
      for (int i = 0; i < size - 1; ++i) gaps[i] = g.begin + i + 1;
      for (int k = 0; k < parts - 1; ++k) {
        const int pick = k + static_cast<int>(rng.UniformInt(gaps.size() - k));
        std::swap(gaps[k], gaps[pick]);
        cuts.push_back(gaps[k]);
      }
      std::sort(cuts.begin(), cuts.end());
      cuts.push_back(g.end);
      int begin = g.begin;
      for (int cut : cuts) {
        vertices.push_back({.level = level,
                            .parent = g.vertex,
                            .point = level == 0 ? order[begin] : -1});
        next.push_back({static_cast<VertexId>(vertices.size()) - 1, begin, cut});
        begin = cut;
      }
    }
    frontier = std::move(next);
  }
  return HstTree::Create(lambda, depth, std::move(vertices));
}

absl::StatusOr<Metric> RandomEuclideanMetric(int n, int dim, double side,
                                             Rng& rng) {
  if (n < 1 || dim < 1 || !(side > 0)) {
    return absl::InvalidArgumentError("random euclidean: bad parameters");
  }
  std::vector<std::vector<double>> coords(n, std::vector<double>(dim));
  for (auto& row : coords) {
    for (double& x : row) x = side * rng.Uniform01();
  }
  return Metric::FromEuclidean(coords);
}

ClientVector RandomClients(int n, int64_t max_clients, Rng& rng) {
  ClientVector clients(n);
  for (int64_t& c : clients) {
    c = static_cast<int64_t>(rng.UniformInt(max_clients + 1));
  }
  return clients;
}

}  // namespace dpufl
