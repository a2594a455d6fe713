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

// Exact Wasserstein projection onto the LDP polytope.
//
// The projection is the linear program
//
//   min sum_ij C_ij pi_ij  s.t.  pi 1 = mu,  alpha m <= pi^T 1 <= beta m,
//
// solved as a min-cost flow on the network
//
//   source -> u_i (flow mu_i) -> v_j (cost C_ij) -> sink (flow in
//   [alpha m_j, beta m_j]).
//
// Lower bounds on the demand arcs are removed by the usual transformation:
// the mandatory part alpha m_j is routed straight to a super sink, the
// optional part (beta - alpha) m_j through an intermediate node whose arc to
// the super sink carries the remaining 1 - alpha m(X).

#ifndef WPROJ_EXACT_SOLVER_H_
#define WPROJ_EXACT_SOLVER_H_

#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "wproj/geometry.h"
#include "wproj/matrix.h"
#include "wproj/polytope.h"

namespace wproj {

struct TransportPlan {
  Matrix pi;               // k x k_v
  double objective = 0.0;  // sum C_ij pi_ij
};

struct ExactProjection {
  Distribution nu;
  TransportPlan plan;
};

// W_p projection of mu onto Q. `plan.objective` is W_p^p(nu, mu).
absl::StatusOr<ExactProjection> ProjectExact(const CostMatrix& cost,
                                             const Distribution& mu,
                                             const LdpPolytope& q);

// Unconstrained optimal transport between mu (rows) and nu (columns).
absl::StatusOr<TransportPlan> SolveTransport(const CostMatrix& cost,
                                             std::span<const double> mu,
                                             std::span<const double> nu);

// W_p(nu, mu) = (optimal transport cost)^{1/p}.
absl::StatusOr<double> WassersteinDistance(const CostMatrix& cost,
                                           std::span<const double> mu,
                                           std::span<const double> nu);

// Projection of a Dirac input onto Q in closed form.
struct DiracProjection {
  double phi = 0.0;  // W_p^p of the projection
  Distribution nu;
  double tau = 0.0;  // threshold cost
};

// Fractional-knapsack greedy for one cost row: every coordinate starts at
// alpha m_j, then the extra (beta - alpha) m_j is granted in ascending cost
// order until the total reaches one. Ties are visited by index.
absl::StatusOr<DiracProjection> ProjectDiracClosedForm(
    std::span<const double> cost_row, const LdpPolytope& q);

// The same greedy over a precomputed ascending `order` of the row, without
// materializing nu unless `nu` is non-null. Shared with the base-measure
// optimizer, which calls it k times per iteration.
struct ThresholdFill {
  double phi = 0.0;
  double tau = 0.0;
};
absl::StatusOr<ThresholdFill> FillDiracRow(std::span<const double> cost_row,
                                           std::span<const int> order,
                                           std::span<const double> m,
                                           double alpha, double beta,
                                           std::vector<double>* nu = nullptr);

// Indices of `row` sorted by (cost, index).
std::vector<int> AscendingOrder(std::span<const double> row);

}  // namespace wproj

#endif  // WPROJ_EXACT_SOLVER_H_
