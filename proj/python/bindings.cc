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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "dpufl/cli.h"
#include "dpufl/general_solver.h"
#include "dpufl/json_io.h"
#include "dpufl/lowerbound.h"
#include "dpufl/oracle.h"
#include "dpufl/privacy_audit.h"
#include "dpufl/tree_solver.h"

namespace py = pybind11;

namespace {

template <typename T>
T Unwrap(absl::StatusOr<T> value) {
  if (!value.ok()) throw std::invalid_argument(std::string(value.status().message()));
  return *std::move(value);
}

std::string SolveJson(const std::string& instance_json, double epsilon,
                      double lambda, uint64_t seed,
                      std::optional<uint64_t> tree_seed, bool base) {
  const dpufl::UflInstance instance =
      Unwrap(dpufl::ParseInstance(instance_json));
  const uint64_t t = tree_seed.value_or(dpufl::DeriveSeed(seed, 0));
  const dpufl::GeneralSolution solution =
      base ? Unwrap(dpufl::SolveGeneralBase(instance, epsilon, lambda, t))
           : Unwrap(dpufl::SolveGeneral(instance, epsilon, lambda, t, seed));
  return dpufl::GeneralSolutionToJson(solution).dump();
}

std::string SolveTreeJson(const std::string& tree_json,
                          const std::vector<int64_t>& clients,
                          double facility_cost, double epsilon, uint64_t seed,
                          bool base, bool return_all_marked, bool leaf_only) {
  const dpufl::HstTree tree = Unwrap(dpufl::ParseTree(tree_json));
  const dpufl::SolveOptions options{.leaf_only = leaf_only,
                                    .return_all_marked = return_all_marked};
  const dpufl::Solution solution =
      base ? Unwrap(dpufl::SolveTreeBase(tree, clients, facility_cost, epsilon,
                                         options))
           : Unwrap(dpufl::SolveTreeDp(tree, clients, facility_cost, epsilon,
                                       seed, options));
  return dpufl::SerializeSolution(solution);
}

std::tuple<double, std::vector<int>> Opt(const std::string& instance_json) {
  const dpufl::OptResult result =
      Unwrap(dpufl::OptExhaustive(Unwrap(dpufl::ParseInstance(instance_json))));
  return {result.cost, result.set};
}

std::tuple<double, std::vector<int>> OptTree(const std::string& tree_json,
                                             const std::vector<int64_t>& clients,
                                             double facility_cost,
                                             bool leaves_only) {
  const dpufl::HstTree tree = Unwrap(dpufl::ParseTree(tree_json));
  const dpufl::OptResult result = Unwrap(dpufl::OptTreeDp(
      tree, clients, facility_cost,
      leaves_only ? dpufl::FacilitySites::kLeavesOnly
                  : dpufl::FacilitySites::kAllVertices));
  return {result.cost, result.set};
}

py::dict Ledger(double lambda, double facility_cost, double epsilon) {
  const dpufl::SolverParams params =
      Unwrap(dpufl::SolverParams::Create(epsilon, facility_cost, lambda));
  const dpufl::PrivacyLedger ledger = dpufl::AnalyticEpsilon(params);
  py::dict out;
  out["per_level"] = ledger.per_level;
  out["total"] = ledger.total;
  out["closed_form"] = ledger.closed_form;
  out["budget"] = ledger.budget;
  out["l_prime"] = params.l_prime;
  return out;
}

py::dict TwoPointTable(double facility_cost, int64_t m) {
  const dpufl::TwoPointCostTable table =
      dpufl::MakeTwoPointCostTable(facility_cost, m);
  py::dict out;
  out["one_closed"] = table.one_closed;
  out["one_open"] = table.one_open;
  out["many_closed"] = table.many_closed;
  out["many_open"] = table.many_open;
  return out;
}

py::dict EvaluatePolicy(const std::string& policy_name, int n, double epsilon,
                        double facility_cost, int trials, uint64_t seed) {
  const dpufl::Policy policy = Unwrap(dpufl::Policy::Parse(policy_name));
  const dpufl::StarFamily family =
      Unwrap(dpufl::StarFamily::Create(n, epsilon, facility_cost));
  const dpufl::PolicyOutcome outcome =
      Unwrap(dpufl::EvaluatePolicy(policy, family, trials, seed));
  py::dict out;
  out["cost"] = outcome.cost;
  out["opt"] = outcome.opt;
  out["ratio"] = outcome.ratio;
  out["mean_ratio"] = outcome.mean_ratio;
  out["max_ratio"] = outcome.max_ratio;
  out["expected_ratio"] = outcome.expected_ratio;
  out["per_leaf_cost"] = outcome.per_leaf_cost;
  out["per_leaf_opt"] = outcome.per_leaf_opt;
  return out;
}

std::tuple<int, std::string, std::string> RunCli(
    const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = dpufl::cli::Dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

PYBIND11_MODULE(_dpufl, m) {
  m.doc() = "Differentially private facility location on HSTs";

  m.def("solve", &SolveJson, py::arg("instance_json"), py::arg("epsilon"),
        py::arg("lam") = 1.5, py::arg("seed") = 0,
        py::arg("tree_seed") = py::none(), py::arg("base") = false,
        "Embeds and solves an instance; returns the solution as JSON text.");
  m.def("solve_tree", &SolveTreeJson, py::arg("tree_json"), py::arg("clients"),
        py::arg("facility_cost"), py::arg("epsilon"), py::arg("seed") = 0,
        py::arg("base") = false, py::arg("return_all_marked") = false,
        py::arg("leaf_only") = false);
  m.def("opt", &Opt, py::arg("instance_json"));
  m.def("opt_tree", &OptTree, py::arg("tree_json"), py::arg("clients"),
        py::arg("facility_cost"), py::arg("leaves_only") = false);
  m.def("privacy_ledger", &Ledger, py::arg("lam"), py::arg("facility_cost"),
        py::arg("epsilon"));
  m.def("two_point_cost_table", &TwoPointTable, py::arg("facility_cost"),
        py::arg("m"));
  m.def("expected_opt_per_leaf", &dpufl::ExpectedOptPerLeaf,
        py::arg("facility_cost"), py::arg("m"));
  m.def("evaluate_policy", &EvaluatePolicy, py::arg("policy"), py::arg("n"),
        py::arg("epsilon"), py::arg("facility_cost"), py::arg("trials"),
        py::arg("seed") = 0);
  m.def("run_cli", &RunCli, py::arg("args"),
        "Runs a CLI subcommand in-process; returns (exit_code, stdout, stderr).");
}
