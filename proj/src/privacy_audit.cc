// Copyright 2026 The WProj Authors
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

#include "wproj/privacy_audit.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/strings/str_cat.h"
#include "json.hpp"
#include "parallel.h"
#include "wproj/random.h"

namespace wproj {

absl::StatusOr<AuditReport> AuditOutputs(
    const std::vector<Distribution>& outputs, double epsilon,
    double tolerance) {
  if (outputs.empty()) return absl::InvalidArgumentError("no outputs to audit");
  const int kv = outputs.front().size();
  for (const Distribution& out : outputs) {
    if (out.size() != kv) {
      return absl::InvalidArgumentError(absl::StrCat(
          "mechanism outputs have lengths ", kv, " and ", out.size()));
    }
  }
  AuditReport report;
  report.epsilon_claimed = epsilon;
  report.tolerance = tolerance;
  report.num_inputs = static_cast<int>(outputs.size());
  report.max_log_ratio = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < kv; ++j) {
    int hi = 0;
    int lo = 0;
    for (int i = 1; i < report.num_inputs; ++i) {
      if (outputs[i][j] > outputs[hi][j]) hi = i;
      if (outputs[i][j] < outputs[lo][j]) lo = i;
    }
    const double top = outputs[hi][j];
    const double bottom = outputs[lo][j];
    double ratio = 0.0;  // 0/0 counts as a ratio of one
    if (top > 0.0) {
      ratio = bottom > 0.0 ? std::log(top) - std::log(bottom)
                           : std::numeric_limits<double>::infinity();
    }
    if (ratio > report.max_log_ratio) {
      report.max_log_ratio = ratio;
      report.witness = {hi, lo, j};
    }
  }
  report.pass = report.max_log_ratio <= epsilon + tolerance;
  return report;
}

absl::StatusOr<AuditReport> AuditLdp(
    const Mechanism& mechanism, int k, double epsilon,
    const std::vector<Distribution>& extra_inputs, double tolerance) {
  if (k < 1) return absl::InvalidArgumentError("k must be >= 1");
  const int n = k + static_cast<int>(extra_inputs.size());
  std::vector<absl::StatusOr<Distribution>> results(
      n, absl::UnknownError("not evaluated"));
  internal::ParallelFor(n, 0, [&](int i) {
    results[i] = i < k ? mechanism(Distribution::Dirac(k, i))
                       : mechanism(extra_inputs[i - k]);
  });
  std::vector<Distribution> outputs;
  outputs.reserve(n);
  for (int i = 0; i < n; ++i) {
    if (!results[i].ok()) {
      return absl::Status(results[i].status().code(),
                          absl::StrCat("mechanism failed on input ", i, ": ",
                                       results[i].status().message()));
    }
    outputs.push_back(*std::move(results[i]));
  }
  return AuditOutputs(outputs, epsilon, tolerance);
}

std::string AuditReportJson(const AuditReport& report) {
  nlohmann::ordered_json j;
  if (std::isfinite(report.max_log_ratio)) {
    j["max_log_ratio"] = report.max_log_ratio;
  } else {
    j["max_log_ratio"] = "inf";
  }
  j["witness"] = {{"input_high", report.witness.input_high},
                  {"input_low", report.witness.input_low},
                  {"coordinate", report.witness.coordinate}};
  j["epsilon_claimed"] = report.epsilon_claimed;
  j["tolerance"] = report.tolerance;
  j["num_inputs"] = report.num_inputs;
  j["pass"] = report.pass;
  return j.dump(2);
}

std::vector<int> Sample(const Distribution& nu, std::uint64_t seed, int n) {
  std::vector<double> cdf(nu.size());
  double acc = 0.0;
  for (int j = 0; j < nu.size(); ++j) {
    acc += nu[j];
    cdf[j] = acc;
  }
  SplitMix64 rng(seed);
  std::vector<int> draws(std::max(n, 0));
  for (int& d : draws) {
    const double u = rng.Uniform() * acc;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    d = static_cast<int>(
        std::min<std::ptrdiff_t>(it - cdf.begin(), nu.size() - 1));
  }
  return draws;
}

}  // namespace wproj
