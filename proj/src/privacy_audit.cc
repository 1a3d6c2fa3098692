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

#include "dpufl/privacy_audit.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace dpufl {

bool PrivacyLedger::WithinBudget() const {
  return total <= budget * (1 + 1e-12);
}

PrivacyLedger AnalyticEpsilon(const SolverParams& params) {
  PrivacyLedger ledger;
  ledger.budget = params.epsilon;
  const double eta = params.eta;
  const int lp = params.l_prime;
  for (int l = 0; l < lp; ++l) {
    const double eps_l = params.c * std::pow(eta, lp + l) / params.facility_cost;
    ledger.per_level.push_back(eps_l);
    ledger.total += eps_l;
  }
  ledger.closed_form = lp == 0 ? 0.0
                               : params.c * std::pow(eta, lp) /
                                     params.facility_cost *
                                     (std::pow(eta, lp) - 1) / (eta - 1);
  return ledger;
}

double PathEpsilon(const HstTree& tree, const SolverParams& params,
                   VertexId leaf) {
  double total = 0;
  for (VertexId v = leaf; v >= 0; v = tree.parent(v)) {
    const int l = tree.level(v);
    if (l >= params.l_prime) break;
    total += params.c * std::pow(params.eta, params.l_prime + l) /
             params.facility_cost;
  }
  return total;
}

double LaplaceCdf(double x, double scale) {
  if (x < 0) return 0.5 * std::exp(x / scale);
  return 1 - 0.5 * std::exp(-x / scale);
}

double LaplaceTail(double t, double scale) {
  if (t >= 0) return 0.5 * std::exp(-t / scale);
  return 1 - 0.5 * std::exp(t / scale);
}

double MarkingProb(int64_t count, int level, const SolverParams& params) {
  if (level >= params.l_prime) return 1;
  const double scale = *LaplaceScale(level, params);
  const double threshold = params.facility_cost / std::pow(params.lambda, level);
  return LaplaceTail(threshold - static_cast<double>(count), scale);
}

namespace {

// Natural logs of Pr[X >= t] and Pr[X < t] for X ~ Laplace(0, scale).
// Working in log space keeps deep-tail ratios exact where the
// probabilities themselves would underflow.
double LogTail(double t, double scale) {
  if (t >= 0) return std::log(0.5) - t / scale;
  return std::log1p(-0.5 * std::exp(t / scale));
}

double LogCdf(double t, double scale) { return LogTail(-t, scale); }

}  // namespace

NeighborRatio NeighborRatioForScale(double threshold, double scale,
                                    int64_t max_count, double epsilon_bound) {
  NeighborRatio out;
  out.bound = std::exp(epsilon_bound);
  if (scale == 0) {
    // A deterministic threshold flips from impossible to certain at some
    // count unless the threshold lies outside the checked range.
    const bool flips = threshold > 0 && threshold <= max_count + 1;
    out.max_ratio = flips ? std::numeric_limits<double>::infinity() : 1.0;
    out.unbounded = flips;
    out.within_bound = !flips;
    return out;
  }
  double max_log = 0;
  for (int64_t n = 0; n <= max_count; ++n) {
    const double t = threshold - static_cast<double>(n);
    max_log = std::max(
        {max_log, std::abs(LogTail(t, scale) - LogTail(t - 1, scale)),
         std::abs(LogCdf(t, scale) - LogCdf(t - 1, scale))});
  }
  out.max_ratio = std::exp(max_log);
  out.unbounded = std::isinf(out.max_ratio);
  out.within_bound =
      !out.unbounded && out.max_ratio <= out.bound + kRatioTolerance;
  return out;
}

absl::StatusOr<NeighborRatio> NeighborRatioCheck(int level,
                                                 const SolverParams& params,
                                                 int64_t max_count) {
  if (level < 0 || level >= params.l_prime) {
    return absl::InvalidArgumentError(absl::StrCat(
        "neighbor_ratio_check: level ", level, " is not below L' = ",
        params.l_prime));
  }
  const double scale = *LaplaceScale(level, params);
  const double eps_l =
      params.c * std::pow(params.eta, params.l_prime + level) /
      params.facility_cost;
  return NeighborRatioForScale(
      params.facility_cost / std::pow(params.lambda, level), scale, max_count,
      eps_l);
}

}  // namespace dpufl
