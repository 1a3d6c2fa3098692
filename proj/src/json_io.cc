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

#include "dpufl/json_io.h"

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "dpufl/status_macros.h"

namespace dpufl {
namespace {

using nlohmann::json;

absl::Status FieldError(const std::string& path, const std::string& what) {
  return absl::InvalidArgumentError(absl::StrCat(path, ": ", what));
}

absl::Status CheckKeys(const json& doc, const std::string& where,
                       const std::set<std::string>& allowed) {
  if (!doc.is_object()) return FieldError(where, "expected an object");
  for (const auto& [key, value] : doc.items()) {
    if (!allowed.contains(key)) {
      return FieldError(where.empty() ? key : absl::StrCat(where, ".", key),
                        "unknown field");
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<const json*> Require(const json& doc, const std::string& key) {
  auto it = doc.find(key);
  if (it == doc.end()) return FieldError(key, "missing field");
  return &*it;
}

absl::StatusOr<double> AsNumber(const json& value, const std::string& path) {
  if (!value.is_number()) return FieldError(path, "expected a number");
  const double x = value.get<double>();
  if (!std::isfinite(x)) return FieldError(path, "expected a finite number");
  return x;
}

absl::StatusOr<int64_t> AsInt(const json& value, const std::string& path) {
  if (value.is_number_integer()) return value.get<int64_t>();
  if (value.is_number_float()) {
    const double x = value.get<double>();
    if (std::isfinite(x) && x == std::floor(x) && std::abs(x) < 0x1.0p53) {
      return static_cast<int64_t>(x);
    }
  }
  return FieldError(path, "expected an integer");
}

absl::StatusOr<std::vector<std::vector<double>>> AsMatrix(
    const json& value, const std::string& path, int rows,
    std::optional<int> cols) {
  if (!value.is_array()) return FieldError(path, "expected an array");
  if (static_cast<int>(value.size()) != rows) {
    return FieldError(path, absl::StrCat("expected ", rows, " rows, got ",
                                         value.size()));
  }
  std::vector<std::vector<double>> out(rows);
  for (int i = 0; i < rows; ++i) {
    const std::string row_path = absl::StrCat(path, "[", i, "]");
    const json& row = value[i];
    if (!row.is_array()) return FieldError(row_path, "expected an array");
    const int want = cols.value_or(static_cast<int>(value[0].size()));
    if (static_cast<int>(row.size()) != want) {
      return FieldError(row_path, absl::StrCat("expected ", want,
                                               " entries, got ", row.size()));
    }
    for (int j = 0; j < want; ++j) {
      DPUFL_ASSIGN_OR_RETURN(out[i].emplace_back(),
                             AsNumber(row[j], absl::StrCat(row_path, "[", j, "]")));
    }
  }
  return out;
}

absl::StatusOr<std::vector<int64_t>> AsIntArray(const json& value,
                                                const std::string& path) {
  if (!value.is_array()) return FieldError(path, "expected an array");
  std::vector<int64_t> out;
  out.reserve(value.size());
  for (size_t i = 0; i < value.size(); ++i) {
    DPUFL_ASSIGN_OR_RETURN(out.emplace_back(),
                           AsInt(value[i], absl::StrCat(path, "[", i, "]")));
  }
  return out;
}

template <typename T>
std::vector<int> ToIntVector(const std::vector<T>& values) {
  return std::vector<int>(values.begin(), values.end());
}

absl::StatusOr<json> ParseJson(const std::string& text) {
  json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) return absl::InvalidArgumentError("malformed JSON");
  return doc;
}

}  // namespace

absl::StatusOr<UflInstance> ParseInstance(const std::string& text) {
  DPUFL_ASSIGN_OR_RETURN(const json doc, ParseJson(text));
  return InstanceFromJson(doc);
}

absl::StatusOr<UflInstance> InstanceFromJson(const json& doc) {
  DPUFL_RETURN_IF_ERROR(CheckKeys(
      doc, "", {"n", "distances", "coords", "metric", "facility_cost",
                "clients"}));
  DPUFL_ASSIGN_OR_RETURN(const json* n_field, Require(doc, "n"));
  DPUFL_ASSIGN_OR_RETURN(const int64_t n, AsInt(*n_field, "n"));
  if (n < 1) return FieldError("n", "must be at least 1");

  const bool has_distances = doc.contains("distances");
  const bool has_coords = doc.contains("coords");
  if (has_distances && has_coords) {
    return absl::InvalidArgumentError("ambiguous metric source");
  }
  if (!has_distances && !has_coords) {
    return absl::InvalidArgumentError(
        "missing metric source: give \"distances\" or \"coords\"");
  }
  Metric metric;
  if (has_distances) {
    if (doc.contains("metric")) {
      return FieldError("metric", "only allowed together with \"coords\"");
    }
    DPUFL_ASSIGN_OR_RETURN(
        const auto table,
        AsMatrix(doc["distances"], "distances", static_cast<int>(n),
                 static_cast<int>(n)));
    DPUFL_ASSIGN_OR_RETURN(metric, Metric::FromTable(table));
  } else {
    auto it = doc.find("metric");
    if (it == doc.end() || !it->is_string() ||
        it->get<std::string>() != "euclidean") {
      return FieldError("metric", "\"coords\" requires \"metric\": \"euclidean\"");
    }
    DPUFL_ASSIGN_OR_RETURN(
        const auto coords,
        AsMatrix(doc["coords"], "coords", static_cast<int>(n), std::nullopt));
    DPUFL_ASSIGN_OR_RETURN(metric, Metric::FromEuclidean(coords));
  }
  const auto violations = ValidateMetric(metric);
  if (!violations.empty()) {
    return FieldError(has_distances ? "distances" : "coords",
                      violations.front().ToString());
  }

  DPUFL_ASSIGN_OR_RETURN(const json* f_field, Require(doc, "facility_cost"));
  DPUFL_ASSIGN_OR_RETURN(const double f, AsNumber(*f_field, "facility_cost"));
  DPUFL_ASSIGN_OR_RETURN(const json* c_field, Require(doc, "clients"));
  DPUFL_ASSIGN_OR_RETURN(ClientVector clients, AsIntArray(*c_field, "clients"));
  if (static_cast<int64_t>(clients.size()) != n) {
    return FieldError("clients", absl::StrCat("expected ", n,
                                              " entries, got ", clients.size()));
  }
  for (size_t i = 0; i < clients.size(); ++i) {
    if (clients[i] < 0) {
      return FieldError(absl::StrCat("clients[", i, "]"), "negative count");
    }
  }
  auto instance = UflInstance::Create(std::move(metric), f, std::move(clients));
  if (!instance.ok()) {
    return absl::InvalidArgumentError(
        absl::StrCat("instance: ", instance.status().message()));
  }
  return instance;
}

json InstanceToJson(const UflInstance& instance) {
  return json{{"n", instance.size()},
              {"distances", instance.metric.ToTable()},
              {"facility_cost", instance.facility_cost},
              {"clients", instance.clients}};
}

absl::StatusOr<HstTree> ParseTree(const std::string& text) {
  DPUFL_ASSIGN_OR_RETURN(const json doc, ParseJson(text));
  return TreeFromJson(doc);
}

absl::StatusOr<HstTree> TreeFromJson(const json& doc) {
  DPUFL_RETURN_IF_ERROR(CheckKeys(doc, "",
                                  {"lambda", "depth", "vertices", "beta",
                                   "permutation", "scale", "manifest"}));
  DPUFL_ASSIGN_OR_RETURN(const json* lambda_field, Require(doc, "lambda"));
  DPUFL_ASSIGN_OR_RETURN(const double lambda, AsNumber(*lambda_field, "lambda"));
  DPUFL_ASSIGN_OR_RETURN(const json* depth_field, Require(doc, "depth"));
  DPUFL_ASSIGN_OR_RETURN(const int64_t depth, AsInt(*depth_field, "depth"));
  DPUFL_ASSIGN_OR_RETURN(const json* list, Require(doc, "vertices"));
  if (!list->is_array()) return FieldError("vertices", "expected an array");

  const int64_t count = static_cast<int64_t>(list->size());
  std::vector<HstVertex> vertices(count);
  std::vector<bool> seen(count, false);
  for (int64_t i = 0; i < count; ++i) {
    const std::string path = absl::StrCat("vertices[", i, "]");
    const json& item = (*list)[i];
    DPUFL_RETURN_IF_ERROR(
        CheckKeys(item, path, {"id", "level", "parent", "point"}));
    int64_t fields[4];
    const char* names[4] = {"id", "level", "parent", "point"};
    for (int k = 0; k < 4; ++k) {
      const std::string field_path = absl::StrCat(path, ".", names[k]);
      auto it = item.find(names[k]);
      if (it == item.end()) return FieldError(field_path, "missing field");
      DPUFL_ASSIGN_OR_RETURN(fields[k], AsInt(*it, field_path));
    }
    const int64_t id = fields[0];
    if (id < 0 || id >= count || seen[id]) {
      return FieldError(absl::StrCat(path, ".id"),
                        "ids must be a permutation of 0..V-1");
    }
    seen[id] = true;
    vertices[id] = {.level = static_cast<int>(fields[1]),
                    .parent = static_cast<VertexId>(fields[2]),
                    .point = static_cast<PointId>(fields[3])};
  }
  auto tree = HstTree::Create(lambda, static_cast<int>(depth),
                              std::move(vertices));
  if (!tree.ok()) {
    return absl::InvalidArgumentError(
        absl::StrCat("tree: ", tree.status().message()));
  }
  const auto violations = ValidateHst(*tree);
  if (!violations.empty()) {
    return absl::InvalidArgumentError(
        absl::StrCat("tree: vertex ", violations.front().vertex, ": ",
                     violations.front().message));
  }
  return tree;
}

json TreeToJson(const HstTree& tree) {
  json vertices = json::array();
  for (VertexId v = 0; v < tree.num_vertices(); ++v) {
    vertices.push_back({{"id", v},
                        {"level", tree.level(v)},
                        {"parent", tree.parent(v)},
                        {"point", tree.point(v)}});
  }
  return json{{"lambda", tree.lambda()},
              {"depth", tree.depth()},
              {"vertices", std::move(vertices)}};
}

json EmbeddingToJson(const EmbeddingResult& embedding, double scale) {
  json doc = TreeToJson(embedding.tree);
  doc["beta"] = embedding.beta;
  doc["permutation"] = embedding.permutation;
  doc["scale"] = scale;
  return doc;
}

json CostToJson(const CostBreakdown& cost) {
  return json{{"facility_cost", cost.facility},
              {"connection_cost", cost.connection},
              {"total", cost.total}};
}

json SolutionToJson(const Solution& solution) {
  json doc{{"superset", solution.superset},
           {"open", solution.open},
           {"assignment", solution.serving},
           {"facility_cost", solution.cost.facility},
           {"connection_cost", solution.cost.connection},
           {"total", solution.cost.total},
           {"extended_roots", solution.extended_roots}};
  doc["seed"] = solution.seed.has_value() ? json(*solution.seed) : json(nullptr);
  return doc;
}

absl::StatusOr<Solution> SolutionFromJson(const json& doc) {
  DPUFL_RETURN_IF_ERROR(CheckKeys(
      doc, "", {"superset", "open", "assignment", "facility_cost",
                "connection_cost", "total", "seed", "extended_roots",
                "manifest"}));
  Solution out;
  for (const auto& [key, target] :
       {std::pair<const char*, std::vector<VertexId>*>{"superset",
                                                       &out.superset},
        {"open", &out.open},
        {"assignment", &out.serving}}) {
    DPUFL_ASSIGN_OR_RETURN(const json* field, Require(doc, key));
    DPUFL_ASSIGN_OR_RETURN(const auto values, AsIntArray(*field, key));
    *target = ToIntVector(values);
  }
  for (const auto& [key, target] :
       {std::pair<const char*, double*>{"facility_cost", &out.cost.facility},
        {"connection_cost", &out.cost.connection},
        {"total", &out.cost.total}}) {
    DPUFL_ASSIGN_OR_RETURN(const json* field, Require(doc, key));
    DPUFL_ASSIGN_OR_RETURN(*target, AsNumber(*field, key));
  }
  if (auto it = doc.find("extended_roots"); it != doc.end()) {
    DPUFL_ASSIGN_OR_RETURN(const int64_t roots, AsInt(*it, "extended_roots"));
    out.extended_roots = static_cast<int>(roots);
  }
  if (auto it = doc.find("seed"); it != doc.end() && !it->is_null()) {
    if (!it->is_number_unsigned() && !it->is_number_integer()) {
      return FieldError("seed", "expected an integer");
    }
    out.seed = it->get<uint64_t>();
  }
  return out;
}

std::string SerializeSolution(const Solution& solution) {
  return SolutionToJson(solution).dump();
}

json GeneralSolutionToJson(const GeneralSolution& solution) {
  json doc{{"tree", EmbeddingToJson(solution.embedding, solution.scale)},
           {"tree_seed", solution.tree_seed},
           {"tree_solution", SolutionToJson(solution.tree_solution)},
           {"open", solution.open_points},
           {"assignment", solution.serving_points},
           {"cost_in_tree", CostToJson(solution.cost_in_tree)},
           {"cost_in_original", CostToJson(solution.cost_in_original)}};
  doc["noise_seed"] = solution.noise_seed.has_value()
                          ? json(*solution.noise_seed)
                          : json(nullptr);
  return doc;
}

json OptResultToJson(const OptResult& result) {
  return json{{"cost", result.cost}, {"set", result.set}};
}

}  // namespace dpufl
