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

#include "wproj/exact_solver.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "absl/strings/str_cat.h"
#include "min_cost_flow.h"

namespace wproj {
namespace {

// Mass shortfall tolerated when checking that the flow routed everything.
constexpr double kFlowTolerance = 1e-9;

struct ColumnBounds {
  std::vector<double> lower;
  std::vector<double> upper;
};

// Min-cost flow from row marginal mu into columns whose totals must lie in
// [lower_j, upper_j]. Returns the plan; fails if the bounds cannot absorb mu.
absl::StatusOr<TransportPlan> SolveBounded(const CostMatrix& cost,
                                           std::span<const double> mu,
                                           const ColumnBounds& bounds) {
  const int k = cost.input_size();
  const int kv = cost.output_size();
  const int source = 0;
  const int mid = k + kv + 1;
  const int sink = k + kv + 2;
  internal::MinCostFlow flow(k + kv + 3);

  double supply = 0.0;
  for (int i = 0; i < k; ++i) {
    if (mu[i] <= 0.0) continue;
    supply += mu[i];
    flow.AddArc(source, 1 + i, mu[i], 0.0);
  }
  std::vector<int> transport_arcs(static_cast<std::size_t>(k) * kv, -1);
  for (int i = 0; i < k; ++i) {
    if (mu[i] <= 0.0) continue;
    for (int j = 0; j < kv; ++j) {
      transport_arcs[static_cast<std::size_t>(i) * kv + j] =
          flow.AddArc(1 + i, 1 + k + j, mu[i], cost(i, j));
    }
  }
  double mandatory = 0.0;
  for (int j = 0; j < kv; ++j) {
    mandatory += bounds.lower[j];
    flow.AddArc(1 + k + j, sink, bounds.lower[j], 0.0);
    flow.AddArc(1 + k + j, mid, bounds.upper[j] - bounds.lower[j], 0.0);
  }
  flow.AddArc(mid, sink, supply - mandatory, 0.0);

  const double sent = flow.Solve(source, sink, supply);
  if (sent < supply - kFlowTolerance) {
    return absl::FailedPreconditionError(
        absl::StrCat("transport infeasible: routed ", sent, " of ", supply));
  }

  TransportPlan plan{Matrix(k, kv), 0.0};
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < kv; ++j) {
      const int arc = transport_arcs[static_cast<std::size_t>(i) * kv + j];
      if (arc >= 0) plan.pi(i, j) = std::max(0.0, flow.Flow(arc));
    }
  }
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < kv; ++j) plan.objective += cost(i, j) * plan.pi(i, j);
  }
  return plan;
}

absl::Status CheckMarginal(std::span<const double> x, int expected,
                           const char* name) {
  if (static_cast<int>(x.size()) != expected) {
    return absl::InvalidArgumentError(
        absl::StrCat(name, " has length ", x.size(), ", expected ", expected));
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<ExactProjection> ProjectExact(const CostMatrix& cost,
                                             const Distribution& mu,
                                             const LdpPolytope& q) {
  if (absl::Status s = CheckMarginal(mu.probs(), cost.input_size(), "mu");
      !s.ok()) {
    return s;
  }
  if (q.size() != cost.output_size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "polytope has ", q.size(), " coordinates, cost matrix has ",
        cost.output_size(), " columns"));
  }
  ColumnBounds bounds;
  for (int j = 0; j < q.size(); ++j) {
    bounds.lower.push_back(q.lower(j));
    bounds.upper.push_back(q.upper(j));
  }
  absl::StatusOr<TransportPlan> plan = SolveBounded(cost, mu.probs(), bounds);
  if (!plan.ok()) return plan.status();

  std::vector<double> nu(cost.output_size(), 0.0);
  for (int i = 0; i < plan->pi.rows(); ++i) {
    for (int j = 0; j < plan->pi.cols(); ++j) nu[j] += plan->pi(i, j);
  }
  absl::StatusOr<Distribution> dist = Distribution::Create(std::move(nu));
  if (!dist.ok()) return dist.status();
  return ExactProjection{*std::move(dist), *std::move(plan)};
}

absl::StatusOr<TransportPlan> SolveTransport(const CostMatrix& cost,
                                             std::span<const double> mu,
                                             std::span<const double> nu) {
  if (absl::Status s = CheckMarginal(mu, cost.input_size(), "mu"); !s.ok()) {
    return s;
  }
  if (absl::Status s = CheckMarginal(nu, cost.output_size(), "nu"); !s.ok()) {
    return s;
  }
  const double mu_mass = std::accumulate(mu.begin(), mu.end(), 0.0);
  const double nu_mass = std::accumulate(nu.begin(), nu.end(), 0.0);
  if (std::abs(mu_mass - nu_mass) > kFlowTolerance) {
    return absl::InvalidArgumentError(absl::StrCat(
        "marginals have different mass: ", mu_mass, " vs ", nu_mass));
  }
  ColumnBounds bounds{std::vector<double>(nu.begin(), nu.end()),
                      std::vector<double>(nu.begin(), nu.end())};
  // Let the columns absorb rounding differences between the two masses.
  const double slack = std::max(0.0, mu_mass - nu_mass);
  for (double& u : bounds.upper) u += slack;
  return SolveBounded(cost, mu, bounds);
}

absl::StatusOr<double> WassersteinDistance(const CostMatrix& cost,
                                           std::span<const double> mu,
                                           std::span<const double> nu) {
  absl::StatusOr<TransportPlan> plan = SolveTransport(cost, mu, nu);
  if (!plan.ok()) return plan.status();
  return std::pow(std::max(0.0, plan->objective), 1.0 / cost.p());
}

std::vector<int> AscendingOrder(std::span<const double> row) {
  std::vector<int> order(row.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return row[a] < row[b]; });
  return order;
}

absl::StatusOr<ThresholdFill> FillDiracRow(std::span<const double> cost_row,
                                           std::span<const int> order,
                                           std::span<const double> m,
                                           double alpha, double beta,
                                           std::vector<double>* nu) {
  constexpr double kMassTolerance = 1e-12;
  const int kv = static_cast<int>(cost_row.size());
  double base = 0.0;
  for (double mj : m) base += mj;
  const double remaining = 1.0 - alpha * base;
  if (beta * base < 1.0 - kMassTolerance ||
      alpha * base > 1.0 + kMassTolerance) {
    return absl::FailedPreconditionError(
        absl::StrCat("empty LDP polytope: alpha*m(X) = ", alpha * base,
                     ", beta*m(X) = ", beta * base));
  }

  // tau is the smallest cost t at which granting the extra capacity of every
  // coordinate with C <= t covers the remaining mass. Ties are merged.
  double tau = cost_row[order.front()];
  if (remaining > kMassTolerance) {
    double granted = 0.0;
    bool found = false;
    for (int pos = 0; pos < kv;) {
      const double c = cost_row[order[pos]];
      double group = 0.0;
      while (pos < kv && cost_row[order[pos]] == c) {
        group += (beta - alpha) * m[order[pos]];
        ++pos;
      }
      granted += group;
      if (granted >= remaining - kMassTolerance) {
        tau = c;
        found = true;
        break;
      }
    }
    if (!found) tau = cost_row[order.back()];
  }

  ThresholdFill fill;
  fill.tau = tau;
  fill.phi = tau;
  for (int j = 0; j < kv; ++j) {
    const double c = cost_row[j];
    if (c > tau) {
      fill.phi += alpha * (c - tau) * m[j];
    } else if (c < tau) {
      fill.phi -= beta * (tau - c) * m[j];
    }
  }

  if (nu != nullptr) {
    nu->assign(kv, 0.0);
    double left = std::max(0.0, remaining);
    for (int j = 0; j < kv; ++j) (*nu)[j] = alpha * m[j];
    for (int j : order) {
      const double give = std::min((beta - alpha) * m[j], left);
      (*nu)[j] += give;
      left -= give;
      if (left <= 0.0) break;
    }
  }
  return fill;
}

absl::StatusOr<DiracProjection> ProjectDiracClosedForm(
    std::span<const double> cost_row, const LdpPolytope& q) {
  if (static_cast<int>(cost_row.size()) != q.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "cost row has ", cost_row.size(), " entries, polytope has ", q.size()));
  }
  const std::vector<int> order = AscendingOrder(cost_row);
  std::vector<double> nu;
  absl::StatusOr<ThresholdFill> fill =
      FillDiracRow(cost_row, order, q.m(), q.alpha(), q.beta(), &nu);
  if (!fill.ok()) return fill.status();
  absl::StatusOr<Distribution> dist = Distribution::Create(std::move(nu));
  if (!dist.ok()) return dist.status();
  return DiracProjection{fill->phi, *std::move(dist), fill->tau};
}

}  // namespace wproj
