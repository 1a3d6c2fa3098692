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

#include "dpufl/cli.h"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "dpufl/frt.h"
#include "dpufl/general_solver.h"
#include "dpufl/generators.h"
#include "dpufl/hst.h"
#include "dpufl/instance.h"
#include "dpufl/json_io.h"
#include "dpufl/lowerbound.h"
#include "dpufl/oracle.h"
#include "dpufl/privacy_audit.h"
#include "dpufl/random.h"
#include "dpufl/status_macros.h"
#include "dpufl/tree_solver.h"
#include "json.hpp"

namespace dpufl::cli {
namespace {

using nlohmann::json;

constexpr char kVersion[] = "0.1.0";

// Shortest round-trip decimal form, shared by JSON and CSV output.
std::string Num(double x) { return json(x).dump(); }

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot read ", path));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

absl::Status WriteFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return absl::NotFoundError(absl::StrCat("cannot write ", path));
  out << text;
  return out ? absl::OkStatus()
             : absl::InternalError(absl::StrCat("write failed: ", path));
}

absl::StatusOr<json> ReadJson(const std::string& path) {
  DPUFL_ASSIGN_OR_RETURN(const std::string text, ReadFile(path));
  json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) {
    return absl::InvalidArgumentError(absl::StrCat(path, ": malformed JSON"));
  }
  return doc;
}

absl::Status Prefixed(const absl::Status& status, const std::string& prefix) {
  return absl::Status(status.code(),
                      absl::StrCat(prefix, ": ", status.message()));
}

std::string UtcTimestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json Manifest(const CLI::App& sub, std::optional<uint64_t> seed) {
  json flags = json::object();
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_name();
    if (name == "--help") continue;
    if (opt->get_expected_min() == 0) {
      flags[name] = opt->count() > 0;
    } else if (opt->count() > 0) {
      flags[name] = absl::StrJoin(opt->results(), ",");
    } else if (!opt->get_default_str().empty()) {
      flags[name] = opt->get_default_str();
    } else {
      flags[name] = nullptr;
    }
  }
  json manifest{{"command", sub.get_name()},
                {"flags", std::move(flags)},
                {"version", kVersion},
                {"timestamp", UtcTimestamp()}};
  manifest["seed"] = seed.has_value() ? json(*seed) : json(nullptr);
  return manifest;
}

void WarnLambda(double lambda, std::ostream& err) {
  if (lambda == 2) {
    err << "warning: lambda = 2 is accepted, but the approximation guarantee "
           "needs lambda < 2\n";
  }
}

// Client counts and facility cost from either an instance document or a
// bare {"facility_cost", "clients"} document.
struct ClientData {
  double facility_cost = 0;
  ClientVector clients;
};

absl::StatusOr<ClientData> LoadClients(const std::string& path) {
  DPUFL_ASSIGN_OR_RETURN(const json doc, ReadJson(path));
  if (doc.is_object() &&
      (doc.contains("distances") || doc.contains("coords"))) {
    auto instance = InstanceFromJson(doc);
    if (!instance.ok()) return Prefixed(instance.status(), path);
    return ClientData{instance->facility_cost, instance->clients};
  }
  if (!doc.is_object()) {
    return absl::InvalidArgumentError(absl::StrCat(path, ": expected object"));
  }
  for (const auto& [key, value] : doc.items()) {
    if (key != "facility_cost" && key != "clients" && key != "n") {
      return absl::InvalidArgumentError(
          absl::StrCat(path, ": ", key, ": unknown field"));
    }
  }
  ClientData data;
  if (!doc.contains("facility_cost") || !doc["facility_cost"].is_number()) {
    return absl::InvalidArgumentError(
        absl::StrCat(path, ": facility_cost: expected a number"));
  }
  data.facility_cost = doc["facility_cost"].get<double>();
  if (!(data.facility_cost > 0) || !std::isfinite(data.facility_cost)) {
    return absl::InvalidArgumentError(
        absl::StrCat(path, ": facility_cost: must be positive"));
  }
  if (!doc.contains("clients") || !doc["clients"].is_array()) {
    return absl::InvalidArgumentError(
        absl::StrCat(path, ": clients: expected an array"));
  }
  for (size_t i = 0; i < doc["clients"].size(); ++i) {
    const json& c = doc["clients"][i];
    if (!c.is_number_integer() || c.get<int64_t>() < 0) {
      return absl::InvalidArgumentError(absl::StrCat(
          path, ": clients[", i, "]: expected a non-negative integer"));
    }
    data.clients.push_back(c.get<int64_t>());
  }
  return data;
}

absl::StatusOr<UflInstance> LoadInstance(const std::string& path) {
  DPUFL_ASSIGN_OR_RETURN(const json doc, ReadJson(path));
  auto instance = InstanceFromJson(doc);
  if (!instance.ok()) return Prefixed(instance.status(), path);
  return instance;
}

absl::StatusOr<HstTree> LoadTree(const std::string& path) {
  DPUFL_ASSIGN_OR_RETURN(const json doc, ReadJson(path));
  auto tree = TreeFromJson(doc);
  if (!tree.ok()) return Prefixed(tree.status(), path);
  return tree;
}

absl::Status CheckClientsMatchTree(const HstTree& tree,
                                   const ClientVector& clients) {
  if (static_cast<int>(clients.size()) != tree.num_points()) {
    return absl::InvalidArgumentError(
        absl::StrCat("clients: expected ", tree.num_points(),
                     " entries (tree leaves), got ", clients.size()));
  }
  return absl::OkStatus();
}

// What a subcommand produced.
struct Result {
  json doc;
  std::string summary;
  // CSV text for --csv, when the subcommand has one.
  std::optional<std::string> csv;
  bool checks_failed = false;
};

// ---------------------------------------------------------------- embed

struct EmbedFlags {
  std::string input;
  double lambda = 1.5;
  uint64_t seed = 0;
};

absl::StatusOr<Result> RunEmbed(const EmbedFlags& flags, std::ostream& err) {
  WarnLambda(flags.lambda, err);
  DPUFL_ASSIGN_OR_RETURN(const UflInstance instance, LoadInstance(flags.input));
  Metric metric = instance.metric;
  double scale = 1;
  if (metric.Diameter() > 0) {
    DPUFL_ASSIGN_OR_RETURN(RescaledMetric rescaled, RescaleMetric(metric));
    metric = std::move(rescaled.metric);
    scale = rescaled.scale;
  }
  Rng rng(flags.seed);
  DPUFL_ASSIGN_OR_RETURN(const EmbeddingResult embedding,
                         FrtEmbed(metric, flags.lambda, rng));
  Result result;
  result.doc = EmbeddingToJson(embedding, scale);
  result.summary = absl::StrCat("embedded ", instance.size(),
                                " points into a depth-", embedding.tree.depth(),
                                " HST with ", embedding.tree.num_vertices(),
                                " vertices");
  return result;
}

// ---------------------------------------------------------------- solve

struct SolveFlags {
  std::string input;
  double epsilon = 0;
  double lambda = 1.5;
  uint64_t seed = 0;
  std::optional<uint64_t> tree_seed;
  bool base = false;
};

absl::StatusOr<Result> RunSolve(const SolveFlags& flags, std::ostream& err) {
  WarnLambda(flags.lambda, err);
  DPUFL_ASSIGN_OR_RETURN(const UflInstance instance, LoadInstance(flags.input));
  const uint64_t tree_seed = flags.tree_seed.value_or(DeriveSeed(flags.seed, 0));
  GeneralSolution solution;
  if (flags.base) {
    DPUFL_ASSIGN_OR_RETURN(solution, SolveGeneralBase(instance, flags.epsilon,
                                                      flags.lambda, tree_seed));
  } else {
    DPUFL_ASSIGN_OR_RETURN(solution,
                           SolveGeneral(instance, flags.epsilon, flags.lambda,
                                        tree_seed, flags.seed));
  }
  Result result;
  result.doc = GeneralSolutionToJson(solution);
  result.summary =
      absl::StrCat(flags.base ? "base" : "dp", " solve: ",
                   solution.open_points.size(), " open, cost ",
                   Num(solution.cost_in_original.total), " (tree view ",
                   Num(solution.cost_in_tree.total), ")");
  return result;
}

// ----------------------------------------------------------- solve-tree

struct SolveTreeFlags {
  std::string tree;
  std::string clients;
  double epsilon = 0;
  uint64_t seed = 0;
  bool base = false;
  bool return_all_marked = false;
  bool leaf_only = false;
};

absl::StatusOr<Result> RunSolveTree(const SolveTreeFlags& flags,
                                    std::ostream& err) {
  DPUFL_ASSIGN_OR_RETURN(const HstTree tree, LoadTree(flags.tree));
  WarnLambda(tree.lambda(), err);
  DPUFL_ASSIGN_OR_RETURN(const ClientData data, LoadClients(flags.clients));
  DPUFL_RETURN_IF_ERROR(CheckClientsMatchTree(tree, data.clients));
  const SolveOptions options{.leaf_only = flags.leaf_only,
                             .return_all_marked = flags.return_all_marked};
  Solution solution;
  if (flags.base) {
    DPUFL_ASSIGN_OR_RETURN(solution,
                           SolveTreeBase(tree, data.clients, data.facility_cost,
                                         flags.epsilon, options));
  } else {
    DPUFL_ASSIGN_OR_RETURN(
        solution, SolveTreeDp(tree, data.clients, data.facility_cost,
                              flags.epsilon, flags.seed, options));
  }
  Result result;
  result.doc = SolutionToJson(solution);
  result.summary = absl::StrCat(
      flags.base ? "base" : "dp", " tree solve: |R| = ",
      solution.superset.size(), ", ", solution.open.size(), " open, cost ",
      Num(solution.cost.total));
  return result;
}

// ------------------------------------------------------------------ opt

struct OptFlags {
  std::string input;
  std::string tree;
  bool leaves_only = false;
};

absl::StatusOr<Result> RunOpt(const OptFlags& flags) {
  Result result;
  OptResult opt;
  std::string mode;
  if (flags.tree.empty()) {
    DPUFL_ASSIGN_OR_RETURN(const UflInstance instance,
                           LoadInstance(flags.input));
    DPUFL_ASSIGN_OR_RETURN(opt, OptExhaustive(instance));
    mode = "exhaustive";
  } else {
    DPUFL_ASSIGN_OR_RETURN(const HstTree tree, LoadTree(flags.tree));
    DPUFL_ASSIGN_OR_RETURN(const ClientData data, LoadClients(flags.input));
    DPUFL_RETURN_IF_ERROR(CheckClientsMatchTree(tree, data.clients));
    const FacilitySites sites = flags.leaves_only ? FacilitySites::kLeavesOnly
                                                  : FacilitySites::kAllVertices;
    DPUFL_ASSIGN_OR_RETURN(
        opt, OptTreeDp(tree, data.clients, data.facility_cost, sites));
    mode = flags.leaves_only ? "tree-dp-leaves" : "tree-dp";
  }
  result.doc = OptResultToJson(opt);
  result.doc["mode"] = mode;
  result.summary = absl::StrCat("opt (", mode, ") = ", Num(opt.cost), " with ",
                                opt.set.size(), " facilities");
  return result;
}

// ---------------------------------------------------------------- audit

struct AuditFlags {
  double lambda = 1.5;
  double f = 1;
  double epsilon = 0;
  int64_t mc_samples = 0;
  uint64_t seed = 0;
  int64_t max_count = -1;
};

absl::StatusOr<Result> RunAudit(const AuditFlags& flags, std::ostream& err) {
  WarnLambda(flags.lambda, err);
  DPUFL_ASSIGN_OR_RETURN(const SolverParams params,
                         SolverParams::Create(flags.epsilon, flags.f,
                                              flags.lambda));
  if (flags.mc_samples < 0) {
    return absl::InvalidArgumentError("--mc-samples must be non-negative");
  }
  const int64_t max_count =
      flags.max_count >= 0 ? flags.max_count
                           : 10 * static_cast<int64_t>(std::ceil(flags.f));
  const PrivacyLedger ledger = AnalyticEpsilon(params);

  Result result;
  json checks = json::array();
  auto add_check = [&](const std::string& name, bool pass, json detail) {
    checks.push_back({{"name", name}, {"pass", pass}, {"detail", detail}});
    if (!pass) result.checks_failed = true;
  };
  add_check("ledger_within_budget", ledger.WithinBudget(),
            {{"total", ledger.total}, {"budget", ledger.budget}});
  add_check("closed_form_agrees",
            std::abs(ledger.total - ledger.closed_form) <=
                1e-12 * std::max(1.0, std::abs(ledger.closed_form)),
            {{"total", ledger.total}, {"closed_form", ledger.closed_form}});
  for (int level = 0; level < params.l_prime; ++level) {
    DPUFL_ASSIGN_OR_RETURN(const NeighborRatio ratio,
                           NeighborRatioCheck(level, params, max_count));
    add_check(absl::StrCat("neighbor_ratio_level_", level), ratio.within_bound,
              {{"max_ratio", ratio.unbounded ? json("inf") : json(ratio.max_ratio)},
               {"bound", ratio.bound},
               {"max_count", max_count}});
  }

  json mc = json::array();
  if (flags.mc_samples > 0) {
    const double samples = static_cast<double>(flags.mc_samples);
    for (int level = 0; level < params.l_prime; ++level) {
      DPUFL_ASSIGN_OR_RETURN(const double scale, LaplaceScale(level, params));
      const double threshold = flags.f / std::pow(flags.lambda, level);
      for (int64_t count : {int64_t{0}, int64_t{1}}) {
        Rng rng(DeriveSeed(flags.seed, 2 * level + count));
        int64_t hits = 0;
        for (int64_t s = 0; s < flags.mc_samples; ++s) {
          if (static_cast<double>(count) + SampleLaplace(scale, rng) >=
              threshold) {
            ++hits;
          }
        }
        const double empirical = static_cast<double>(hits) / samples;
        const double analytic = MarkingProb(count, level, params);
        const double sigma = std::sqrt(analytic * (1 - analytic) / samples);
        const bool pass = std::abs(empirical - analytic) <= 5 * sigma + 1e-12;
        mc.push_back({{"level", level},
                      {"count", count},
                      {"empirical", empirical},
                      {"analytic", analytic},
                      {"pass", pass}});
        add_check(absl::StrCat("monte_carlo_level_", level, "_count_", count),
                  pass, {{"empirical", empirical}, {"analytic", analytic}});
      }
    }
  }

  result.doc = {{"ledger",
                 {{"per_level", ledger.per_level},
                  {"total", ledger.total},
                  {"closed_form", ledger.closed_form},
                  {"budget", ledger.budget}}},
                {"params",
                 {{"lambda", params.lambda},
                  {"facility_cost", params.facility_cost},
                  {"epsilon", params.epsilon},
                  {"eta", params.eta},
                  {"c", params.c},
                  {"l_prime", params.l_prime}}},
                {"checks", std::move(checks)},
                {"monte_carlo", std::move(mc)}};
  result.summary = absl::StrCat("ledger total ", Num(ledger.total), " of ",
                                Num(ledger.budget), ", checks ",
                                result.checks_failed ? "FAILED" : "passed");
  return result;
}

// ----------------------------------------------------------- lowerbound

struct LowerboundFlags {
  double epsilon = 0;
  double f = 1;
  int n = 0;
  int trials = 200;
  std::string policy = "open-all";
  uint64_t seed = 0;
  double lambda = 1.5;
};

absl::StatusOr<Result> RunLowerbound(const LowerboundFlags& flags,
                                     std::ostream& err) {
  DPUFL_ASSIGN_OR_RETURN(Policy policy, Policy::Parse(flags.policy));
  policy.lambda = flags.lambda;
  if (policy.kind == Policy::Kind::kDpSolver) WarnLambda(flags.lambda, err);
  // A placeholder n fixes m before the default n = 100 sqrt(m) is known.
  DPUFL_ASSIGN_OR_RETURN(StarFamily family,
                         StarFamily::Create(1, flags.epsilon, flags.f));
  family.n = flags.n > 0 ? flags.n
                         : static_cast<int>(std::ceil(
                               100 * std::sqrt(static_cast<double>(family.m))));
  DPUFL_ASSIGN_OR_RETURN(const PolicyOutcome outcome,
                         EvaluatePolicy(policy, family, flags.trials,
                                        flags.seed));
  const TwoPointCostTable table = MakeTwoPointCostTable(flags.f, family.m);
  const double root_m = std::sqrt(static_cast<double>(family.m));
  const double inequality_rhs = 0.2 * flags.f * root_m / (root_m + 1);

  Result result;
  result.doc = {
      {"family",
       {{"n", family.n},
        {"epsilon", family.epsilon},
        {"facility_cost", family.facility_cost},
        {"m", family.m},
        {"radius", family.radius}}},
      {"policy", policy.Name()},
      {"trials", flags.trials},
      {"expected_ratio", outcome.expected_ratio},
      {"mean_ratio", outcome.mean_ratio},
      {"max_ratio", outcome.max_ratio},
      {"per_leaf_cost", outcome.per_leaf_cost},
      {"per_leaf_opt", outcome.per_leaf_opt},
      {"expected_opt_per_leaf", ExpectedOptPerLeaf(flags.f, family.m)},
      {"two_point_table",
       {{"one_closed", table.one_closed},
        {"one_open", table.one_open},
        {"many_closed", table.many_closed},
        {"many_open", table.many_open}}},
      {"averaged_bound",
       {{"left_side", outcome.per_leaf_cost},
        {"right_side", inequality_rhs},
        {"holds", outcome.per_leaf_cost >= inequality_rhs}}}};
  std::string csv = "trial,cost,opt,ratio\n";
  for (size_t t = 0; t < outcome.cost.size(); ++t) {
    absl::StrAppend(&csv, t, ",", Num(outcome.cost[t]), ",",
                    Num(outcome.opt[t]), ",", Num(outcome.ratio[t]), "\n");
  }
  result.csv = std::move(csv);
  result.summary = absl::StrCat(policy.Name(), ": E[cost]/E[opt] = ",
                                Num(outcome.expected_ratio), " over ",
                                flags.trials, " trials, n = ", family.n);
  return result;
}

// ---------------------------------------------------------------- bench

struct BenchFlags {
  std::string config;
  uint64_t seed = 0;
};

struct Generator {
  std::string kind;
  int n = 8;
  int depth = 4;
  int dim = 2;
  int64_t max_clients = 5;
  double facility_cost = 1;
  double epsilon = 0.25;  // star family only
};

struct BenchConfig {
  std::vector<Generator> generators;
  std::vector<double> epsilons;
  std::vector<double> lambdas{1.5};
  std::vector<uint64_t> seeds{0};
};

absl::Status ConfigError(const std::string& path, const std::string& what) {
  return absl::InvalidArgumentError(absl::StrCat("config: ", path, ": ", what));
}

absl::StatusOr<std::vector<double>> NumberList(const json& value,
                                               const std::string& path) {
  if (!value.is_array() || value.empty()) {
    return ConfigError(path, "expected a non-empty array of numbers");
  }
  std::vector<double> out;
  for (size_t i = 0; i < value.size(); ++i) {
    if (!value[i].is_number()) {
      return ConfigError(absl::StrCat(path, "[", i, "]"), "expected a number");
    }
    out.push_back(value[i].get<double>());
  }
  return out;
}

absl::StatusOr<BenchConfig> ParseBenchConfig(const json& doc) {
  if (!doc.is_object()) return ConfigError("$", "expected an object");
  BenchConfig config;
  for (const auto& [key, value] : doc.items()) {
    if (key == "generators") {
      if (!value.is_array() || value.empty()) {
        return ConfigError(key, "expected a non-empty array");
      }
      for (size_t i = 0; i < value.size(); ++i) {
        const std::string path = absl::StrCat("generators[", i, "]");
        const json& item = value[i];
        if (!item.is_object()) return ConfigError(path, "expected an object");
        Generator gen;
        for (const auto& [gkey, gvalue] : item.items()) {
          const std::string gpath = absl::StrCat(path, ".", gkey);
          if (gkey == "kind") {
            if (!gvalue.is_string()) return ConfigError(gpath, "expected a string");
            gen.kind = gvalue.get<std::string>();
          } else if (gkey == "n" || gkey == "depth" || gkey == "dim" ||
                     gkey == "max_clients") {
            if (!gvalue.is_number_integer() || gvalue.get<int64_t>() < 0 ||
                gvalue.get<int64_t>() > (int64_t{1} << 30)) {
              return ConfigError(gpath, "expected a non-negative integer");
            }
            const int64_t x = gvalue.get<int64_t>();
            if (gkey == "n") gen.n = static_cast<int>(x);
            if (gkey == "depth") gen.depth = static_cast<int>(x);
            if (gkey == "dim") gen.dim = static_cast<int>(x);
            if (gkey == "max_clients") gen.max_clients = x;
          } else if (gkey == "facility_cost" || gkey == "epsilon") {
            if (!gvalue.is_number()) return ConfigError(gpath, "expected a number");
            (gkey == "facility_cost" ? gen.facility_cost : gen.epsilon) =
                gvalue.get<double>();
          } else {
            return ConfigError(gpath, "unknown field");
          }
        }
        if (gen.kind != "random_hst" && gen.kind != "euclidean" &&
            gen.kind != "star") {
          return ConfigError(absl::StrCat(path, ".kind"),
                             absl::StrCat("unknown generator '", gen.kind,
                                          "' (random_hst, euclidean, star)"));
        }
        if (gen.n < 1) return ConfigError(absl::StrCat(path, ".n"), "must be >= 1");
        const int candidates = gen.kind == "star" ? gen.n + 1 : gen.n;
        if (gen.kind != "random_hst" && candidates > kMaxExhaustiveCandidates) {
          return ConfigError(absl::StrCat(path, ".n"),
                             absl::StrCat("exhaustive opt supports at most ",
                                          kMaxExhaustiveCandidates, " points"));
        }
        config.generators.push_back(gen);
      }
    } else if (key == "epsilons") {
      DPUFL_ASSIGN_OR_RETURN(config.epsilons, NumberList(value, key));
    } else if (key == "lambdas") {
      DPUFL_ASSIGN_OR_RETURN(config.lambdas, NumberList(value, key));
    } else if (key == "seeds") {
      config.seeds.clear();
      if (value.is_number_integer() && value.get<int64_t>() >= 1) {
        for (int64_t s = 0; s < value.get<int64_t>(); ++s) {
          config.seeds.push_back(static_cast<uint64_t>(s));
        }
      } else if (value.is_array() && !value.empty()) {
        for (size_t i = 0; i < value.size(); ++i) {
          if (!value[i].is_number_unsigned() && !value[i].is_number_integer()) {
            return ConfigError(absl::StrCat("seeds[", i, "]"),
                               "expected an integer");
          }
          config.seeds.push_back(value[i].get<uint64_t>());
        }
      } else {
        return ConfigError(key, "expected a positive count or an array");
      }
    } else {
      return ConfigError(key, "unknown field");
    }
  }
  if (config.generators.empty()) return ConfigError("generators", "missing");
  if (config.epsilons.empty()) return ConfigError("epsilons", "missing");
  return config;
}

struct BenchRow {
  int generator = 0;
  std::string kind;
  int n = 0;
  double epsilon = 0;
  double lambda = 0;
  uint64_t seed = 0;
  double base_cost = 0;
  double dp_cost = 0;
  double opt = 0;
  double runtime_ms = 0;
};

absl::StatusOr<BenchRow> RunBenchRow(const Generator& gen, BenchRow row,
                                     uint64_t master) {
  const uint64_t instance_seed =
      DeriveSeed(DeriveSeed(master, static_cast<uint64_t>(row.generator)),
                 row.seed);
  Rng rng(instance_seed);
  const uint64_t noise_seed = DeriveSeed(instance_seed, 1);
  const uint64_t tree_seed = DeriveSeed(instance_seed, 2);
  if (gen.kind == "random_hst") {
    DPUFL_ASSIGN_OR_RETURN(const HstTree tree,
                           RandomHst(gen.n, gen.depth, row.lambda, rng));
    const ClientVector clients = RandomClients(gen.n, gen.max_clients, rng);
    DPUFL_ASSIGN_OR_RETURN(const Solution base,
                           SolveTreeBase(tree, clients, gen.facility_cost,
                                         row.epsilon));
    const auto start = std::chrono::steady_clock::now();
    DPUFL_ASSIGN_OR_RETURN(const Solution dp,
                           SolveTreeDp(tree, clients, gen.facility_cost,
                                       row.epsilon, noise_seed));
    row.runtime_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    DPUFL_ASSIGN_OR_RETURN(const OptResult opt,
                           OptTreeDp(tree, clients, gen.facility_cost));
    row.base_cost = base.cost.total;
    row.dp_cost = dp.cost.total;
    row.opt = opt.cost;
    return row;
  }
  UflInstance instance;
  if (gen.kind == "euclidean") {
    DPUFL_ASSIGN_OR_RETURN(Metric metric,
                           RandomEuclideanMetric(gen.n, gen.dim, 10.0, rng));
    DPUFL_ASSIGN_OR_RETURN(
        instance, UflInstance::Create(std::move(metric), gen.facility_cost,
                                      RandomClients(gen.n, gen.max_clients, rng)));
  } else {
    DPUFL_ASSIGN_OR_RETURN(const StarFamily family,
                           StarFamily::Create(gen.n, gen.epsilon,
                                              gen.facility_cost));
    DPUFL_ASSIGN_OR_RETURN(instance, MakeStarInstance(gen.n, gen.epsilon,
                                                      gen.facility_cost));
    instance.clients = SampleClientVector(family, rng);
  }
  DPUFL_ASSIGN_OR_RETURN(const GeneralSolution base,
                         SolveGeneralBase(instance, row.epsilon, row.lambda,
                                          tree_seed));
  const auto start = std::chrono::steady_clock::now();
  DPUFL_ASSIGN_OR_RETURN(const GeneralSolution dp,
                         SolveGeneral(instance, row.epsilon, row.lambda,
                                      tree_seed, noise_seed));
  row.runtime_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  DPUFL_ASSIGN_OR_RETURN(const OptResult opt, OptExhaustive(instance));
  row.base_cost = base.cost_in_original.total;
  row.dp_cost = dp.cost_in_original.total;
  row.opt = opt.cost;
  return row;
}

double Ratio(double cost, double opt) {
  if (opt == 0) return cost == 0 ? 1 : std::numeric_limits<double>::infinity();
  return cost / opt;
}

absl::StatusOr<Result> RunBench(const BenchFlags& flags) {
  DPUFL_ASSIGN_OR_RETURN(const json doc, ReadJson(flags.config));
  auto parsed = ParseBenchConfig(doc);
  if (!parsed.ok()) return Prefixed(parsed.status(), flags.config);
  const BenchConfig& config = *parsed;

  std::vector<BenchRow> rows;
  for (size_t g = 0; g < config.generators.size(); ++g) {
    for (double epsilon : config.epsilons) {
      for (double lambda : config.lambdas) {
        for (uint64_t seed : config.seeds) {
          rows.push_back({.generator = static_cast<int>(g),
                          .kind = config.generators[g].kind,
                          .n = config.generators[g].n,
                          .epsilon = epsilon,
                          .lambda = lambda,
                          .seed = seed});
        }
      }
    }
  }

  std::vector<absl::StatusOr<BenchRow>> done(rows.size(),
                                             absl::UnknownError("not run"));
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < rows.size(); i = next++) {
      done[i] = RunBenchRow(config.generators[rows[i].generator], rows[i],
                            flags.seed);
    }
  };
  const int threads =
      std::max(1, std::min<int>(ThreadBudget(), static_cast<int>(rows.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  Result result;
  json out_rows = json::array();
  std::string csv =
      "instance,n,epsilon,lambda,seed,base_cost,dp_cost,opt,base_ratio,"
      "dp_ratio,runtime_ms\n";
  for (size_t i = 0; i < done.size(); ++i) {
    if (!done[i].ok()) {
      return Prefixed(done[i].status(),
                      absl::StrCat("bench row ", i, " (generators[",
                                   rows[i].generator, "])"));
    }
    const BenchRow& row = *done[i];
    const std::string instance =
        absl::StrCat(row.kind, "#", row.generator);
    out_rows.push_back({{"instance", instance},
                        {"n", row.n},
                        {"epsilon", row.epsilon},
                        {"lambda", row.lambda},
                        {"seed", row.seed},
                        {"base_cost", row.base_cost},
                        {"dp_cost", row.dp_cost},
                        {"opt", row.opt},
                        {"base_ratio", Ratio(row.base_cost, row.opt)},
                        {"dp_ratio", Ratio(row.dp_cost, row.opt)}});
    absl::StrAppend(&csv, instance, ",", row.n, ",", Num(row.epsilon), ",",
                    Num(row.lambda), ",", row.seed, ",", Num(row.base_cost),
                    ",", Num(row.dp_cost), ",", Num(row.opt), ",",
                    Num(Ratio(row.base_cost, row.opt)), ",",
                    Num(Ratio(row.dp_cost, row.opt)), ",",
                    Num(row.runtime_ms), "\n");
  }
  result.doc = {{"rows", std::move(out_rows)}};
  result.csv = std::move(csv);
  result.summary = absl::StrCat("bench: ", rows.size(), " rows on ", threads,
                                " threads");
  return result;
}

}  // namespace

int ThreadBudget() {
  if (const char* env = std::getenv("DPUFL_THREADS"); env != nullptr) {
    int value = 0;
    if (absl::SimpleAtoi(env, &value) && value >= 1) return value;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

int Dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"Differentially private facility location on HSTs", "dpufl"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  app.set_version_flag("--version", kVersion);

  std::string out_path;
  std::string csv_path;
  bool pretty = false;
  auto add_output = [&](CLI::App* sub, bool with_csv) {
    sub->add_option("--out", out_path, "Write the JSON document here");
    sub->add_flag("--pretty", pretty, "Indented JSON and a summary on stderr");
    if (with_csv) sub->add_option("--csv", csv_path, "Write CSV rows here");
  };

  EmbedFlags embed;
  CLI::App* embed_cmd = app.add_subcommand("embed", "FRT-embed an instance");
  embed_cmd->add_option("--input", embed.input, "Instance JSON")->required();
  embed_cmd->add_option("--lambda", embed.lambda, "HST ratio in (1, 2]");
  embed_cmd->add_option("--seed", embed.seed, "Embedding seed");
  add_output(embed_cmd, false);

  SolveFlags solve;
  uint64_t solve_tree_seed = 0;
  CLI::App* solve_cmd =
      app.add_subcommand("solve", "Embed, then solve on the tree");
  solve_cmd->add_option("--input", solve.input, "Instance JSON")->required();
  solve_cmd->add_option("--epsilon", solve.epsilon, "Privacy budget")
      ->required();
  solve_cmd->add_option("--lambda", solve.lambda, "HST ratio in (1, 2]");
  solve_cmd->add_option("--seed", solve.seed, "Noise seed");
  CLI::Option* tree_seed_opt = solve_cmd->add_option(
      "--tree-seed", solve_tree_seed,
      "Embedding seed (default derived from --seed)");
  solve_cmd->add_flag("--base", solve.base, "Non-private marking");
  add_output(solve_cmd, false);

  SolveTreeFlags solve_tree;
  CLI::App* solve_tree_cmd =
      app.add_subcommand("solve-tree", "Solve on a given HST");
  solve_tree_cmd->add_option("--tree", solve_tree.tree, "Tree JSON")
      ->required();
  solve_tree_cmd
      ->add_option("--clients,--input", solve_tree.clients,
                   "Instance JSON or {facility_cost, clients}")
      ->required();
  solve_tree_cmd->add_option("--epsilon", solve_tree.epsilon, "Privacy budget")
      ->required();
  solve_tree_cmd->add_option("--seed", solve_tree.seed, "Noise seed");
  solve_tree_cmd->add_flag("--base", solve_tree.base, "Non-private marking");
  solve_tree_cmd->add_flag("--return-all-marked", solve_tree.return_all_marked,
                           "Return every marked vertex");
  solve_tree_cmd->add_flag("--leaf-only", solve_tree.leaf_only,
                           "Project open vertices to leaves");
  add_output(solve_tree_cmd, false);

  OptFlags opt;
  CLI::App* opt_cmd = app.add_subcommand("opt", "Exact optimum");
  opt_cmd->add_option("--input", opt.input, "Instance or clients JSON")
      ->required();
  opt_cmd->add_option("--tree", opt.tree, "Solve on this tree metric");
  opt_cmd->add_flag("--leaves-only", opt.leaves_only,
                    "Tree facilities at leaves only");
  add_output(opt_cmd, false);

  AuditFlags audit;
  CLI::App* audit_cmd = app.add_subcommand("audit", "Privacy accounting");
  audit_cmd->add_option("--lambda", audit.lambda, "HST ratio in (1, 2]");
  audit_cmd->add_option("--f", audit.f, "Facility cost");
  audit_cmd->add_option("--epsilon", audit.epsilon, "Privacy budget")
      ->required();
  audit_cmd->add_option("--mc-samples", audit.mc_samples,
                        "Monte-Carlo samples per level and count");
  audit_cmd->add_option("--seed", audit.seed, "Monte-Carlo seed");
  audit_cmd->add_option("--max-count", audit.max_count,
                        "Largest count in ratio checks (default 10 ceil(f))");
  add_output(audit_cmd, false);

  LowerboundFlags lowerbound;
  CLI::App* lowerbound_cmd =
      app.add_subcommand("lowerbound", "Uniform-star policy evaluation");
  lowerbound_cmd->add_option("--epsilon", lowerbound.epsilon, "In (0, 1)")
      ->required();
  lowerbound_cmd->add_option("--f", lowerbound.f, "Facility cost");
  lowerbound_cmd->add_option("--n", lowerbound.n,
                             "Leaves (default ceil(100 sqrt(m)))");
  lowerbound_cmd->add_option("--trials", lowerbound.trials, "Trials");
  lowerbound_cmd->add_option(
      "--policy", lowerbound.policy,
      "open-all, open-none, threshold[:k] or dp-solver[:epsilon]");
  lowerbound_cmd->add_option("--seed", lowerbound.seed, "Master seed");
  lowerbound_cmd->add_option("--lambda", lowerbound.lambda,
                             "HST ratio for dp-solver");
  add_output(lowerbound_cmd, true);

  BenchFlags bench;
  CLI::App* bench_cmd = app.add_subcommand("bench", "Parameter-grid runs");
  bench_cmd->add_option("--config", bench.config, "Bench config JSON")
      ->required();
  bench_cmd->add_option("--seed", bench.seed, "Master seed");
  add_output(bench_cmd, true);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForVersion& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  absl::StatusOr<Result> result = absl::UnknownError("no subcommand");
  std::optional<uint64_t> seed;
  if (sub == embed_cmd) {
    seed = embed.seed;
    result = RunEmbed(embed, err);
  } else if (sub == solve_cmd) {
    solve.tree_seed = tree_seed_opt->count() > 0 ? solve_tree_seed
                                                 : DeriveSeed(solve.seed, 0);
    seed = solve.seed;
    result = RunSolve(solve, err);
  } else if (sub == solve_tree_cmd) {
    seed = solve_tree.seed;
    result = RunSolveTree(solve_tree, err);
  } else if (sub == opt_cmd) {
    result = RunOpt(opt);
  } else if (sub == audit_cmd) {
    seed = audit.seed;
    result = RunAudit(audit, err);
  } else if (sub == lowerbound_cmd) {
    seed = lowerbound.seed;
    result = RunLowerbound(lowerbound, err);
  } else if (sub == bench_cmd) {
    seed = bench.seed;
    result = RunBench(bench);
  }
  if (!result.ok()) {
    err << "error: " << result.status().message() << "\n";
    return kExitValidation;
  }

  json doc = std::move(result->doc);
  doc["manifest"] = Manifest(*sub, seed);
  if (sub == solve_cmd) {
    // Record the resolved tree seed so a replay rebuilds the same tree.
    doc["manifest"]["flags"]["--tree-seed"] = absl::StrCat(*solve.tree_seed);
  }
  const std::string text = doc.dump(pretty ? 2 : -1) + "\n";
  if (out_path.empty()) {
    out << text;
  } else if (absl::Status s = WriteFile(out_path, text); !s.ok()) {
    err << "error: " << s.message() << "\n";
    return kExitValidation;
  }
  if (!csv_path.empty() && result->csv.has_value()) {
    if (absl::Status s = WriteFile(csv_path, *result->csv); !s.ok()) {
      err << "error: " << s.message() << "\n";
      return kExitValidation;
    }
  }
  if (pretty) err << result->summary << "\n";
  return result->checks_failed ? kExitValidation : kExitOk;
}

}  // namespace dpufl::cli
