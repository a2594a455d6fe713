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

#include "wproj/baselines.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"

namespace wproj {

double KpmParams::floor() const { return 1.0 / (std::exp(epsilon) + k - 1); }

std::vector<double> KpmBaseMeasure(const KpmParams& params) {
  return std::vector<double>(params.k,
                             std::exp(params.epsilon / 2) * params.floor());
}

absl::StatusOr<Distribution> KpmTransform(const KpmParams& params,
                                          const Distribution& mu) {
  if (params.k < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("k must be >= 1, got ", params.k));
  }
  if (!(params.epsilon > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon must be > 0, got ", params.epsilon));
  }
  if (mu.size() != params.k) {
    return absl::InvalidArgumentError(
        absl::StrCat("mu has length ", mu.size(), ", expected ", params.k));
  }
  const double fl = params.floor();
  const std::vector<double>& x = mu.probs();
  auto total = [&](double r) {
    double s = 0.0;
    for (double xi : x) s += std::max(xi / r, fl);
    return s;
  };
  // total(1) >= 1 and total(max mu / floor) = k floor <= 1.
  double lo = 1.0;
  double hi = std::max(1.0, *std::max_element(x.begin(), x.end()) / fl);
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (total(mid) > 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  // Solve for r exactly on the active set found by bisection.
  double r = 0.5 * (lo + hi);
  double active_mass = 0.0;
  int floored = 0;
  for (double xi : x) {
    if (xi / r > fl) {
      active_mass += xi;
    } else {
      ++floored;
    }
  }
  const double rest = 1.0 - floored * fl;
  if (active_mass > 0.0 && rest > 0.0) r = active_mass / rest;
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::max(x[i] / r, fl);
  double sum = 0.0;
  for (double o : out) sum += o;
  for (double& o : out) o /= sum;
  return Distribution::Create(std::move(out));
}

double DefaultSensitivity(const CostMatrix& cost) {
  const double inv_p = 1.0 / cost.p();
  double range = 0.0;
  for (int j = 0; j < cost.output_size(); ++j) {
    double lo = INFINITY;
    double hi = -INFINITY;
    for (int i = 0; i < cost.input_size(); ++i) {
      const double d = std::pow(cost(i, j), inv_p);
      lo = std::min(lo, d);
      hi = std::max(hi, d);
    }
    range = std::max(range, hi - lo);
  }
  return range;
}

absl::StatusOr<Distribution> ExpMechanism(const ExpMechParams& params,
                                          const Distribution& mu) {
  const CostMatrix& cost = params.cost;
  if (!(params.sensitivity > 0.0) || !std::isfinite(params.sensitivity)) {
    return absl::InvalidArgumentError(
        absl::StrCat("sensitivity must be positive, got ", params.sensitivity));
  }
  if (!(params.epsilon > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon must be > 0, got ", params.epsilon));
  }
  if (mu.size() != cost.input_size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "mu has length ", mu.size(), ", expected ", cost.input_size()));
  }
  const double inv_p = 1.0 / cost.p();
  const double scale = params.epsilon / (2.0 * params.sensitivity);
  std::vector<double> score(cost.output_size(), 0.0);
  for (int i = 0; i < cost.input_size(); ++i) {
    if (mu[i] == 0.0) continue;
    for (int j = 0; j < cost.output_size(); ++j) {
      score[j] -= mu[i] * std::pow(cost(i, j), inv_p);
    }
  }
  double top = -INFINITY;
  for (double& s : score) {
    s *= scale;
    top = std::max(top, s);
  }
  double sum = 0.0;
  for (double& s : score) {
    s = std::exp(s - top);
    sum += s;
  }
  for (double& s : score) s /= sum;
  return Distribution::Create(std::move(score));
}

}  // namespace wproj
