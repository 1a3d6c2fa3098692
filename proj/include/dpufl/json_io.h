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

#ifndef DPUFL_JSON_IO_H_
#define DPUFL_JSON_IO_H_

#include <string>

#include "absl/status/statusor.h"
#include "dpufl/frt.h"
#include "dpufl/general_solver.h"
#include "dpufl/hst.h"
#include "dpufl/instance.h"
#include "dpufl/oracle.h"
#include "dpufl/tree_solver.h"
#include "json.hpp"

namespace dpufl {

// Instance document:
//   {"n", "distances": [[..]] | "coords": [[..]] + "metric": "euclidean",
//    "facility_cost", "clients"}
// Unknown fields are rejected; errors name the offending field path.
absl::StatusOr<UflInstance> ParseInstance(const std::string& text);
absl::StatusOr<UflInstance> InstanceFromJson(const nlohmann::json& doc);
nlohmann::json InstanceToJson(const UflInstance& instance);

// Tree document: {"lambda", "depth", "vertices": [{"id", "level", "parent",
// "point"}]}. Embedding metadata ("beta", "permutation", "scale") and a
// "manifest" are accepted and ignored.
absl::StatusOr<HstTree> ParseTree(const std::string& text);
absl::StatusOr<HstTree> TreeFromJson(const nlohmann::json& doc);
nlohmann::json TreeToJson(const HstTree& tree);
nlohmann::json EmbeddingToJson(const EmbeddingResult& embedding, double scale);

// Solution document: {"superset", "open", "assignment", "facility_cost",
// "connection_cost", "total", "seed"}.
nlohmann::json SolutionToJson(const Solution& solution);
absl::StatusOr<Solution> SolutionFromJson(const nlohmann::json& doc);
std::string SerializeSolution(const Solution& solution);

nlohmann::json GeneralSolutionToJson(const GeneralSolution& solution);
nlohmann::json OptResultToJson(const OptResult& result);
nlohmann::json CostToJson(const CostBreakdown& cost);

}  // namespace dpufl

#endif  // DPUFL_JSON_IO_H_
