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

#include "wproj/polytope.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "absl/strings/str_cat.h"

namespace wproj {

absl::StatusOr<Distribution> Distribution::Create(std::vector<double> probs) {
  if (probs.empty()) {
    return absl::InvalidArgumentError("distribution must be nonempty");
  }
  double sum = 0.0;
  for (double p : probs) {
    if (!std::isfinite(p) || p < 0.0) {
      return absl::InvalidArgumentError(
          absl::StrCat("probabilities must be finite and >= 0, got ", p));
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    return absl::InvalidArgumentError(
        absl::StrCat("probabilities sum to ", sum, ", expected 1"));
  }
  return Distribution(std::move(probs));
}

Distribution Distribution::Uniform(int size) {
  return Distribution(std::vector<double>(size, 1.0 / size));
}

Distribution Distribution::Dirac(int size, int index) {
  std::vector<double> probs(size, 0.0);
  probs[index] = 1.0;
  return Distribution(std::move(probs));
}

LdpPolytope::LdpPolytope(std::vector<double> m, double epsilon, double mass)
    : m_(std::move(m)),
      epsilon_(epsilon),
      alpha_(std::exp(-epsilon / 2)),
      beta_(std::exp(epsilon / 2)),
      mass_(mass) {}

absl::StatusOr<LdpPolytope> LdpPolytope::Create(std::vector<double> m,
                                                double epsilon) {
  if (!(epsilon > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon must be > 0, got ", epsilon));
  }
  if (m.empty()) {
    return absl::InvalidArgumentError("base measure must be nonempty");
  }
  double mass = 0.0;
  for (double mj : m) {
    if (!std::isfinite(mj) || mj < 0.0) {
      return absl::InvalidArgumentError(absl::StrCat(
          "base measure entries must be finite and >= 0, got ", mj));
    }
    mass += mj;
  }
  if (mass <= 0.0) {
    return absl::InvalidArgumentError("base measure is identically zero");
  }
  const double alpha = std::exp(-epsilon / 2);
  const double beta = std::exp(epsilon / 2);
  // Relative slack so that boundary measures such as m = 1 / (alpha k) pass.
  constexpr double kSlack = 1e-12;
  if (alpha * mass > 1.0 + kSlack || beta * mass < 1.0 - kSlack) {
    return absl::FailedPreconditionError(absl::StrCat(
        "empty LDP polytope: need alpha*m(X) <= 1 <= beta*m(X), got ",
        alpha * mass, " and ", beta * mass));
  }
  return LdpPolytope(std::move(m), epsilon, mass);
}

absl::StatusOr<bool> Contains(const LdpPolytope& q, std::span<const double> nu,
                              double tol) {
  if (static_cast<int>(nu.size()) != q.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "length mismatch: nu has ", nu.size(), ", polytope has ", q.size()));
  }
  for (int j = 0; j < q.size(); ++j) {
    if (nu[j] < q.lower(j) - tol || nu[j] > q.upper(j) + tol) return false;
  }
  return true;
}

absl::StatusOr<KlProjection> KlProjectLog(const LdpPolytope& q,
                                          std::span<const double> log_s,
                                          const ProjectionTolerances& tol) {
  const int n = q.size();
  if (static_cast<int>(log_s.size()) != n) {
    return absl::InvalidArgumentError(absl::StrCat(
        "length mismatch: s has ", log_s.size(), ", polytope has ", n));
  }
  std::vector<int> active;
  std::vector<double> lo(n), hi(n);
  double max_ls = -std::numeric_limits<double>::infinity();
  double min_ls = std::numeric_limits<double>::infinity();
  double min_m = std::numeric_limits<double>::infinity();
  double max_m = 0.0;
  for (int j = 0; j < n; ++j) {
    if (q.m()[j] <= 0.0) continue;
    if (!std::isfinite(log_s[j])) {
      return absl::InvalidArgumentError(absl::StrCat(
          "s must be positive and finite where m > 0; coordinate ", j));
    }
    active.push_back(j);
    lo[j] = std::log(q.lower(j));
    hi[j] = std::log(q.upper(j));
    max_ls = std::max(max_ls, log_s[j]);
    min_ls = std::min(min_ls, log_s[j]);
    min_m = std::min(min_m, q.m()[j]);
    max_m = std::max(max_m, q.m()[j]);
  }

  // When s spans a moderate range, evaluate psi with one exp per call on
  // s / max(s); otherwise clip in log space. Either way psi also reports how
  // many coordinates sit on each bound.
  const bool linear = max_ls - min_ls < 600.0;
  std::vector<double> s_scaled(n, 0.0);
  if (linear) {
    for (int j : active) s_scaled[j] = std::exp(log_s[j] - max_ls);
  }
  struct Eval {
    double total = 0.0;
    int at_lower = 0;
    int at_upper = 0;
  };
  auto psi = [&](double theta) {
    Eval e;
    const double x = linear ? std::exp(theta + max_ls) : 0.0;
    for (int j : active) {
      if (linear) {
        const double y = x * s_scaled[j];
        if (y <= q.lower(j)) {
          e.total += q.lower(j);
          ++e.at_lower;
        } else if (y >= q.upper(j)) {
          e.total += q.upper(j);
          ++e.at_upper;
        } else {
          e.total += y;
        }
      } else {
        const double y = theta + log_s[j];
        if (y <= lo[j]) {
          e.total += q.lower(j);
          ++e.at_lower;
        } else if (y >= hi[j]) {
          e.total += q.upper(j);
          ++e.at_upper;
        } else {
          e.total += std::exp(y);
        }
      }
    }
    return e;
  };

  KlProjection out;
  const int na = static_cast<int>(active.size());
  double theta_lo = std::log(q.alpha() * min_m) - max_ls - 1.0;
  double theta_hi = std::log(q.beta() * max_m) - min_ls + 1.0;
  // Every coordinate is on its lower bound at theta_lo and on its upper bound
  // at theta_hi.
  Eval end_lo{q.alpha() * q.mass(), na, 0};
  Eval end_hi{q.beta() * q.mass(), 0, na};
  double theta = 0.5 * (theta_lo + theta_hi);
  Eval value = psi(theta);
  for (int it = 0; it < tol.max_bisection_iters; ++it) {
    out.bisection_iters = it + 1;
    if (std::abs(value.total - 1.0) <= tol.bisection_tolerance) break;
    if (value.total < 1.0) {
      theta_lo = theta;
      end_lo = value;
    } else {
      theta_hi = theta;
      end_hi = value;
    }
    // No breakpoint left inside the bracket: the clipping pattern is known and
    // the polish below solves for theta exactly.
    if (end_lo.at_lower == end_hi.at_lower &&
        end_lo.at_upper == end_hi.at_upper) {
      break;
    }
    const double mid = 0.5 * (theta_lo + theta_hi);
    if (mid == theta_lo || mid == theta_hi) break;
    theta = mid;
    value = psi(theta);
  }
  out.theta = theta;
  out.residual = std::abs(value.total - 1.0);

  // Polish: rescale the unclipped coordinates so the total is 1 to machine
  // precision. This is a further move of theta, so clipping stays exact.
  out.q.assign(n, 0.0);
  double clipped_mass = 0.0;
  double free_mass = 0.0;
  std::vector<char> is_free(n, 0);
  for (int j : active) {
    const double a = theta + log_s[j];
    if (a <= lo[j]) {
      out.q[j] = q.lower(j);
      clipped_mass += out.q[j];
    } else if (a >= hi[j]) {
      out.q[j] = q.upper(j);
      clipped_mass += out.q[j];
    } else {
      out.q[j] = std::exp(a);
      free_mass += out.q[j];
      is_free[j] = 1;
    }
  }
  if (free_mass > 0.0) {
    const double scale = (1.0 - clipped_mass) / free_mass;
    if (scale > 0.0 && std::isfinite(scale)) {
      for (int j : active) {
        if (is_free[j]) {
          out.q[j] = std::clamp(out.q[j] * scale, q.lower(j), q.upper(j));
        }
      }
      out.theta += std::log(scale);
    }
  }
  return out;
}

absl::StatusOr<Distribution> KlProject(const LdpPolytope& q,
                                       std::span<const double> s,
                                       const ProjectionTolerances& tol) {
  const int n = q.size();
  if (static_cast<int>(s.size()) != n) {
    return absl::InvalidArgumentError(absl::StrCat(
        "length mismatch: s has ", s.size(), ", polytope has ", n));
  }
  double total = 0.0;
  bool inside = true;
  for (int j = 0; j < n; ++j) {
    if (!std::isfinite(s[j]) || s[j] < 0.0) {
      return absl::InvalidArgumentError("s must be finite and nonnegative");
    }
    total += s[j];
    if (s[j] < q.lower(j) || s[j] > q.upper(j)) inside = false;
  }
  if (total <= 0.0) {
    return absl::InvalidArgumentError("s is identically zero");
  }
  // theta = 0 already solves psi(theta) = 1.
  if (inside && std::abs(total - 1.0) <= tol.bisection_tolerance) {
    return Distribution::Create(std::vector<double>(s.begin(), s.end()));
  }
  std::vector<double> log_s(n);
  for (int j = 0; j < n; ++j) log_s[j] = std::log(s[j]);
  absl::StatusOr<KlProjection> proj = KlProjectLog(q, log_s, tol);
  if (!proj.ok()) return proj.status();
  return Distribution::Create(std::move(proj->q));
}

double KlDivergence(std::span<const double> p, std::span<const double> q) {
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    if (q[i] <= 0.0) return std::numeric_limits<double>::infinity();
    total += p[i] * std::log(p[i] / q[i]);
  }
  return total;
}

}  // namespace wproj
