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

// Entropically regularized projection onto the LDP polytope.
//
// The regularized projection argmin_{nu in Q} OT_lambda(nu, mu) is the KL
// projection of the Gibbs kernel K = exp(-C / lambda) / Z onto the
// intersection of {pi 1 = mu} and {pi^T 1 in Q}. Alternating the two
// projections (no Dykstra correction is needed) gives the scaling iteration
//
//   u = mu / (K v),  s = K^T u,  q = KlProject(Q, s),  v <- q / s,
//
// which contracts in the Hilbert projective metric with rate
// c = tau(K^T) tau(K), tau the Birkhoff contraction coefficient.

#ifndef WPROJ_ENTROPIC_SOLVER_H_
#define WPROJ_ENTROPIC_SOLVER_H_

#include <functional>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "wproj/geometry.h"
#include "wproj/matrix.h"
#include "wproj/polytope.h"

namespace wproj {

struct GibbsKernel {
  Matrix k;  // exp(-C / lambda) / Z, entries sum to one
  double lambda = 0.0;
  double log_z = 0.0;

  // Fails if lambda <= 0 or some row or column underflows to all zeros.
  static absl::StatusOr<GibbsKernel> Create(const CostMatrix& cost,
                                            double lambda);
};

struct StoppingRule {
  double tol = 1e-10;  // on d_H(v^{t+1}, v^t)
  int max_iters = 10000;
};

enum class KernelMode {
  kAuto,    // log domain when lambda < 0.05 * max C
  kDirect,  // plain matrix-vector products with K
  kLog,     // log-sum-exp throughout
};

// Snapshot handed to EntropicOptions::observer after each iteration t. Both
// vectors are full length; coordinates outside supp(m) are zero. In log mode
// v is normalized to max 1.
struct IterationState {
  int t = 0;
  std::span<const double> v;      // v^{(t)}, the scaling that produced q
  std::span<const double> q;      // q^{(t)}
  double hilbert_residual = 0.0;  // d_H(v^{(t+1)}, v^{(t)})
};

struct EntropicOptions {
  double lambda = 0.01;
  StoppingRule stop;
  KernelMode mode = KernelMode::kAuto;
  ProjectionTolerances projection;
  // Starting scaling; empty means all ones. Length k_v if given.
  std::vector<double> initial_v;
  // Warm-start small lambda from a geometric sequence of coarser problems.
  // Ignored when initial_v is given.
  bool lambda_scaling = true;
  // tau(K^T) tau(K) costs O(k^2 k_v); skip it for large problems.
  bool compute_birkhoff = true;
  std::function<void(const IterationState&)> observer;
};

struct SolveReport {
  int iterations = 0;         // at the requested lambda
  int warmup_iterations = 0;  // spent on coarser continuation stages
  bool converged = false;
  bool log_domain = false;
  std::vector<double> hilbert_residuals;  // d_H(v^{(t+1)}, v^{(t)})
  std::vector<double> kl_residuals;       // KL(q^{(t)} || q^{(t-1)}), t >= 1
  double birkhoff_c = 1.0;
  // L1 gap between mu and the row sums of diag(u) K diag(v) at exit.
  double final_marginal_gap = 0.0;
  double bisection_tolerance = 0.0;
};

struct EntropicProjection {
  Distribution nu;
  SolveReport report;
};

absl::StatusOr<EntropicProjection> ProjectEntropic(
    const CostMatrix& cost, const Distribution& mu, const LdpPolytope& q,
    const EntropicOptions& options);

// log(max_i(x_i / y_i) / min_i(x_i / y_i)) for strictly positive x, y.
absl::StatusOr<double> HilbertDistance(std::span<const double> x,
                                       std::span<const double> y);

// tanh(Delta(A) / 4) with Delta(A) = log max A_ik A_jl / (A_il A_jk).
absl::StatusOr<double> BirkhoffCoefficient(const Matrix& a);

// Same coefficient for the Gibbs kernel exp(-C / lambda), computed from the
// costs so that it does not underflow.
double GibbsBirkhoffCoefficient(const Matrix& cost, double lambda);

// Certified bound (lambda log(k k_v))^{1/p} on W_p(nu^lambda, mu) -
// W_p(nu^*, mu). Zero when lambda is zero.
double EntropicGapBound(double lambda, int k, int kv, double p);

}  // namespace wproj

#endif  // WPROJ_ENTROPIC_SOLVER_H_
