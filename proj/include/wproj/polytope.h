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

// The LDP polytope
//
//   Q(m, eps) = { nu in simplex : e^{-eps/2} m_j <= nu_j <= e^{eps/2} m_j }
//
// and the KL projection onto it. Any mechanism whose outputs all lie in a
// common Q(m, eps) is eps-LDP.

#ifndef WPROJ_POLYTOPE_H_
#define WPROJ_POLYTOPE_H_

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace wproj {

// Probability vector over a finite ground set.
class Distribution {
 public:
  // Sum tolerance used by Create.
  static constexpr double kSumTolerance = 1e-9;

  // Fails unless all entries are finite, nonnegative and sum to 1 within
  // kSumTolerance.
  static absl::StatusOr<Distribution> Create(std::vector<double> probs);
  static Distribution Uniform(int size);
  static Distribution Dirac(int size, int index);

  const std::vector<double>& probs() const { return probs_; }
  int size() const { return static_cast<int>(probs_.size()); }
  double operator[](int i) const { return probs_[i]; }

  friend bool operator==(const Distribution&, const Distribution&) = default;

 private:
  explicit Distribution(std::vector<double> probs) : probs_(std::move(probs)) {}
  std::vector<double> probs_;
};

// Numerical knobs for the KL projection, gathered so tests can tighten them.
struct ProjectionTolerances {
  // Early exit once |psi(theta) - 1| <= this.
  double bisection_tolerance = 1e-12;
  int max_bisection_iters = 200;
};

class LdpPolytope {
 public:
  // m_j >= 0 with at least one positive entry; epsilon > 0; the polytope must
  // be nonempty: alpha * sum(m) <= 1 <= beta * sum(m).
  static absl::StatusOr<LdpPolytope> Create(std::vector<double> m,
                                            double epsilon);

  const std::vector<double>& m() const { return m_; }
  double epsilon() const { return epsilon_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  int size() const { return static_cast<int>(m_.size()); }
  double lower(int j) const { return alpha_ * m_[j]; }
  double upper(int j) const { return beta_ * m_[j]; }
  double mass() const { return mass_; }

 private:
  LdpPolytope(std::vector<double> m, double epsilon, double mass);

  std::vector<double> m_;
  double epsilon_;
  double alpha_;
  double beta_;
  double mass_;
};

// True iff alpha m_j - tol <= nu_j <= beta m_j + tol for every j.
absl::StatusOr<bool> Contains(const LdpPolytope& q, std::span<const double> nu,
                              double tol);

struct KlProjection {
  std::vector<double> q;
  // log of the scaling e^theta applied to unclipped coordinates.
  double theta = 0.0;
  int bisection_iters = 0;
  // |psi(theta) - 1| at the end of bisection, before the final polish.
  double residual = 0.0;
};

// argmin_{q in Q} KL(q || s), given log(s). Coordinates with m_j = 0 get
// q_j = 0 and ignore log_s[j]; every other log_s[j] must be finite.
absl::StatusOr<KlProjection> KlProjectLog(const LdpPolytope& q,
                                          std::span<const double> log_s,
                                          const ProjectionTolerances& tol = {});

// argmin_{q in Q} KL(q || s) for a nonnegative s that is positive wherever
// m is. The result is a clip of e^theta s into the box [alpha m, beta m].
absl::StatusOr<Distribution> KlProject(const LdpPolytope& q,
                                       std::span<const double> s,
                                       const ProjectionTolerances& tol = {});

// KL(p || q) for probability vectors, with 0 log 0 = 0. Returns +inf if p
// has mass where q does not.
double KlDivergence(std::span<const double> p, std::span<const double> q);

}  // namespace wproj

#endif  // WPROJ_POLYTOPE_H_
