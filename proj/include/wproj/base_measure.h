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

// Choosing the base measure m.
//
// The worst case of the Wasserstein projection mechanism is attained at a
// Dirac input, so its worst-case cost is f(m)^{1/p} with
//
//   f(m) = max_i phi_i(m),
//   phi_i(m) = tau_i + sum_j g_ij m_j,
//   g_ij = alpha (C_ij - tau_i)_+ - beta (tau_i - C_ij)_+,
//
// a convex function of m on the mass interval 1/beta <= sum_j m_j <= 1/alpha.
// The row g_i, evaluated at the active row i, is a subgradient, which
// drives an exponentiated-gradient (generalized KL) mirror descent.

#ifndef WPROJ_BASE_MEASURE_H_
#define WPROJ_BASE_MEASURE_H_

#include <optional>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "wproj/geometry.h"

namespace wproj {

class BaseMeasureProblem {
 public:
  static absl::StatusOr<BaseMeasureProblem> Create(CostMatrix cost,
                                                   double epsilon);

  const CostMatrix& cost() const { return cost_; }
  double epsilon() const { return epsilon_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  // Mass interval [1/beta, 1/alpha].
  double mass_lower() const { return 1.0 / beta_; }
  double mass_upper() const { return 1.0 / alpha_; }
  // D_p = max_ij C_ij.
  double diameter() const { return cost_.max_cost(); }
  std::span<const int> sorted_index(int i) const { return sorted_[i]; }

 private:
  BaseMeasureProblem(CostMatrix cost, double epsilon,
                     std::vector<std::vector<int>> sorted);

  CostMatrix cost_;
  double epsilon_;
  double alpha_;
  double beta_;
  std::vector<std::vector<int>> sorted_;
};

struct WorstCase {
  double f = 0.0;
  int argmax = 0;
  std::vector<double> phi;  // per input row
  std::vector<double> tau;  // per input row
};

// f(m) with the maximizing row and per-row thresholds. Fails if m has a
// negative entry or its mass is outside the interval.
absl::StatusOr<WorstCase> WorstCaseF(const BaseMeasureProblem& problem,
                                     std::span<const double> m);

// g_j = alpha (C_{i*j} - tau)_+ - beta (tau - C_{i*j})_+ at i* = argmax.
absl::StatusOr<std::vector<double>> Subgradient(
    const BaseMeasureProblem& problem, std::span<const double> m);

// Subgradient of phi_i for a given row, from its threshold.
std::vector<double> RowSubgradient(const BaseMeasureProblem& problem, int row,
                                   double tau);

struct MirrorDescentOptions {
  int iterations = 1000;
  // Overrides sqrt(2 (1 + log k)) / (beta D_p sqrt(T)).
  std::optional<double> eta;
  // eta_t = eta / sqrt(t) instead of a constant step.
  bool decaying = false;
};

struct MirrorDescentResult {
  std::vector<double> m_bar;    // (1/T) sum_t m^{(t)}
  std::vector<double> history;  // f(m^{(t)}), t = 1..T
  double f_bar = 0.0;           // f(m_bar)
  double eta = 0.0;
  double regret_bound = 0.0;
};

absl::StatusOr<MirrorDescentResult> OptimizeBaseMeasure(
    const BaseMeasureProblem& problem, const MirrorDescentOptions& options);

// (beta D_p / alpha) sqrt(2 (1 + log k) / T).
double MirrorDescentRegretBound(const BaseMeasureProblem& problem, int t);

// Best measure along the uniform ray m = s 1 with
// s in [1/(beta k_v), 1/(alpha k_v)], found by golden-section search on the
// convex map s -> f(s 1).
absl::StatusOr<std::vector<double>> BestUniformBaseMeasure(
    const BaseMeasureProblem& problem);

// Closed-form optimal base measure on the unit sphere S^d with Euclidean
// distance: m* = alpha_star * uniform, where the cap threshold t_star solves
// G(t) = A U(t) + B H - g(t) (B + A S(t)) = 0.
struct SphereSolution {
  int d = 0;
  double p = 0.0;
  double epsilon = 0.0;
  double t_star = 0.0;
  double alpha_star = 0.0;
  double cap_mass = 0.0;         // S_d(t_star)
  double worst_case_cost = 0.0;  // J(t_star) = W_p^p at any Dirac
  double residual = 0.0;         // |G(t_star)|
};

// Integrals of the density f_d(u) = C_d (1 - u^2)^{(d-2)/2} of <x, y> for y
// uniform on S^d, and the root function G. Computed by adaptive
// Gauss-Kronrod quadrature after substituting u = cos(theta).
class SphereIntegrals {
 public:
  static absl::StatusOr<SphereIntegrals> Create(int d, double p,
                                                double epsilon);

  // S_d(t) = int_t^1 f_d.
  absl::StatusOr<double> CapMass(double t) const;
  // U_{d,p}(t) = int_t^1 g_p f_d, g_p(u) = (2 - 2u)^{p/2}.
  absl::StatusOr<double> CapCost(double t) const;
  // H_{d,p} = int_{-1}^1 g_p f_d.
  double TotalCost() const { return total_cost_; }
  absl::StatusOr<double> G(double t) const;

  double a() const { return a_; }
  double b() const { return b_; }

 private:
  SphereIntegrals(int d, double p, double epsilon);

  int d_;
  double p_;
  double normalizer_;  // C_d
  double a_;           // e^{eps/2} - e^{-eps/2}
  double b_;           // e^{-eps/2}
  double total_cost_ = 0.0;
};

absl::StatusOr<SphereSolution> SphereBaseMeasure(int d, double p,
                                                 double epsilon);

}  // namespace wproj

#endif  // WPROJ_BASE_MEASURE_H_
