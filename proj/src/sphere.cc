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

#include <algorithm>
#include <cmath>
#include <numbers>

#include "absl/strings/str_cat.h"
#include "boost/math/quadrature/gauss_kronrod.hpp"
#include "wproj/base_measure.h"

namespace wproj {
namespace {

constexpr double kAbsoluteTolerance = 1e-10;
constexpr unsigned kMaxDepth = 20;

// int_0^theta_max h(theta) dtheta with an absolute error check.
template <class F>
absl::StatusOr<double> Integrate(F h, double theta_max) {
  if (theta_max <= 0.0) return 0.0;
  double error = 0.0;
  const double value =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
          h, 0.0, theta_max, kMaxDepth, 1e-13, &error);
  if (!(error <= kAbsoluteTolerance) || !std::isfinite(value)) {
    return absl::InternalError(
        absl::StrCat("quadrature did not reach tolerance ", kAbsoluteTolerance,
                     ": error estimate ", error));
  }
  return value;
}

}  // namespace

SphereIntegrals::SphereIntegrals(int d, double p, double epsilon)
    : d_(d),
      p_(p),
      normalizer_(std::exp(std::lgamma((d + 1) / 2.0) - std::lgamma(d / 2.0)) /
                  std::sqrt(std::numbers::pi)),
      a_(std::exp(epsilon / 2) - std::exp(-epsilon / 2)),
      b_(std::exp(-epsilon / 2)) {}

absl::StatusOr<SphereIntegrals> SphereIntegrals::Create(int d, double p,
                                                        double epsilon) {
  if (d < 1) {
    return absl::InvalidArgumentError(absl::StrCat("d must be >= 1, got ", d));
  }
  if (!(p >= 1.0) || !std::isfinite(p)) {
    return absl::InvalidArgumentError(absl::StrCat("p must be >= 1, got ", p));
  }
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon must be > 0, got ", epsilon));
  }
  SphereIntegrals integrals(d, p, epsilon);
  absl::StatusOr<double> total = integrals.CapCost(-1.0);
  if (!total.ok()) return total.status();
  integrals.total_cost_ = *total;
  return integrals;
}

// With u = cos(theta), f_d(u) du = C_d sin^{d-1}(theta) dtheta, smooth on
// [0, pi] for every d >= 1.
absl::StatusOr<double> SphereIntegrals::CapMass(double t) const {
  const double theta_max = std::acos(std::clamp(t, -1.0, 1.0));
  const int power = d_ - 1;
  return Integrate(
      [&](double th) { return normalizer_ * std::pow(std::sin(th), power); },
      theta_max);
}

// g_p(cos theta) = (2 - 2 cos theta)^{p/2} = (2 sin(theta/2))^p.
absl::StatusOr<double> SphereIntegrals::CapCost(double t) const {
  const double theta_max = std::acos(std::clamp(t, -1.0, 1.0));
  const int power = d_ - 1;
  return Integrate(
      [&](double th) {
        return normalizer_ * std::pow(2.0 * std::sin(th / 2), p_) *
               std::pow(std::sin(th), power);
      },
      theta_max);
}

absl::StatusOr<double> SphereIntegrals::G(double t) const {
  absl::StatusOr<double> u = CapCost(t);
  if (!u.ok()) return u.status();
  absl::StatusOr<double> s = CapMass(t);
  if (!s.ok()) return s.status();
  const double g = std::pow(std::max(0.0, 2.0 - 2.0 * t), p_ / 2);
  return a_ * *u + b_ * total_cost_ - g * (b_ + a_ * *s);
}

absl::StatusOr<SphereSolution> SphereBaseMeasure(int d, double p,
                                                 double epsilon) {
  absl::StatusOr<SphereIntegrals> integrals =
      SphereIntegrals::Create(d, p, epsilon);
  if (!integrals.ok()) return integrals.status();

  // G is strictly increasing with G(-1) < 0 < G(1) = B H.
  double lo = -1.0;
  double hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    absl::StatusOr<double> g = integrals->G(mid);
    if (!g.ok()) return g.status();
    if (*g < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  SphereSolution solution;
  solution.d = d;
  solution.p = p;
  solution.epsilon = epsilon;
  solution.t_star = 0.5 * (lo + hi);
  absl::StatusOr<double> s = integrals->CapMass(solution.t_star);
  absl::StatusOr<double> u = integrals->CapCost(solution.t_star);
  absl::StatusOr<double> g = integrals->G(solution.t_star);
  if (!s.ok()) return s.status();
  if (!u.ok()) return u.status();
  if (!g.ok()) return g.status();
  const double denom = integrals->b() + integrals->a() * *s;
  solution.cap_mass = *s;
  solution.alpha_star = 1.0 / denom;
  solution.worst_case_cost =
      (integrals->a() * *u + integrals->b() * integrals->TotalCost()) / denom;
  solution.residual = std::abs(*g);
  return solution;
}

}  // namespace wproj
