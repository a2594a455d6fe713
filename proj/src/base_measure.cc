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

#include "wproj/base_measure.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "wproj/exact_solver.h"

namespace wproj {
namespace {

constexpr double kMassTolerance = 1e-9;

double EffectiveLogK(const BaseMeasureProblem& problem) {
  return std::log(static_cast<double>(
      std::max(problem.cost().input_size(), problem.cost().output_size())));
}

}  // namespace

BaseMeasureProblem::BaseMeasureProblem(CostMatrix cost, double epsilon,
                                       std::vector<std::vector<int>> sorted)
    : cost_(std::move(cost)),
      epsilon_(epsilon),
      alpha_(std::exp(-epsilon / 2)),
      beta_(std::exp(epsilon / 2)),
      sorted_(std::move(sorted)) {}

absl::StatusOr<BaseMeasureProblem> BaseMeasureProblem::Create(CostMatrix cost,
                                                              double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon must be > 0, got ", epsilon));
  }
  std::vector<std::vector<int>> sorted;
  sorted.reserve(cost.input_size());
  for (int i = 0; i < cost.input_size(); ++i) {
    sorted.push_back(AscendingOrder(cost.row(i)));
  }
  return BaseMeasureProblem(std::move(cost), epsilon, std::move(sorted));
}

absl::StatusOr<WorstCase> WorstCaseF(const BaseMeasureProblem& problem,
                                     std::span<const double> m) {
  const CostMatrix& cost = problem.cost();
  if (static_cast<int>(m.size()) != cost.output_size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "m has length ", m.size(), ", expected ", cost.output_size()));
  }
  double mass = 0.0;
  for (double mj : m) {
    if (!(mj >= 0.0) || !std::isfinite(mj)) {
      return absl::InvalidArgumentError("m must be finite and nonnegative");
    }
    mass += mj;
  }
  if (mass < problem.mass_lower() * (1 - kMassTolerance) ||
      mass > problem.mass_upper() * (1 + kMassTolerance)) {
    return absl::OutOfRangeError(
        absl::StrCat("mass of m is ", mass, ", outside [", problem.mass_lower(),
                     ", ", problem.mass_upper(), "]"));
  }
  WorstCase out;
  out.phi.resize(cost.input_size());
  out.tau.resize(cost.input_size());
  for (int i = 0; i < cost.input_size(); ++i) {
    absl::StatusOr<ThresholdFill> fill =
        FillDiracRow(cost.row(i), problem.sorted_index(i), m, problem.alpha(),
                     problem.beta());
    if (!fill.ok()) return fill.status();
    out.phi[i] = fill->phi;
    out.tau[i] = fill->tau;
    if (i == 0 || fill->phi > out.f) {
      out.f = fill->phi;
      out.argmax = i;
    }
  }
  return out;
}

std::vector<double> RowSubgradient(const BaseMeasureProblem& problem, int row,
                                   double tau) {
  const auto c = problem.cost().row(row);
  std::vector<double> g(c.size());
  for (std::size_t j = 0; j < c.size(); ++j) {
    g[j] = problem.alpha() * std::max(c[j] - tau, 0.0) -
           problem.beta() * std::max(tau - c[j], 0.0);
  }
  return g;
}

absl::StatusOr<std::vector<double>> Subgradient(
    const BaseMeasureProblem& problem, std::span<const double> m) {
  absl::StatusOr<WorstCase> wc = WorstCaseF(problem, m);
  if (!wc.ok()) return wc.status();
  return RowSubgradient(problem, wc->argmax, wc->tau[wc->argmax]);
}

double MirrorDescentRegretBound(const BaseMeasureProblem& problem, int t) {
  return problem.beta() * problem.diameter() / problem.alpha() *
         std::sqrt(2.0 * (1.0 + EffectiveLogK(problem)) / t);
}

absl::StatusOr<MirrorDescentResult> OptimizeBaseMeasure(
    const BaseMeasureProblem& problem, const MirrorDescentOptions& options) {
  const int steps = options.iterations;
  if (steps < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("iterations must be >= 1, got ", steps));
  }
  const int kv = problem.cost().output_size();
  MirrorDescentResult result;
  if (options.eta.has_value()) {
    result.eta = *options.eta;
  } else if (problem.diameter() > 0.0) {
    result.eta = std::sqrt(2.0 * (1.0 + EffectiveLogK(problem))) /
                 (problem.beta() * problem.diameter() * std::sqrt(steps));
  }
  result.regret_bound = MirrorDescentRegretBound(problem, steps);

  std::vector<double> m(kv, 1.0 / (problem.alpha() * kv));
  result.m_bar.assign(kv, 0.0);
  result.history.reserve(steps);
  for (int t = 1; t <= steps; ++t) {
    absl::StatusOr<WorstCase> wc = WorstCaseF(problem, m);
    if (!wc.ok()) return wc.status();
    result.history.push_back(wc->f);
    for (int j = 0; j < kv; ++j) result.m_bar[j] += m[j];
    if (t == steps) break;

    const std::vector<double> g =
        RowSubgradient(problem, wc->argmax, wc->tau[wc->argmax]);
    const double eta =
        options.decaying ? result.eta / std::sqrt(t) : result.eta;
    double total = 0.0;
    for (int j = 0; j < kv; ++j) {
      m[j] *= std::exp(-eta * g[j]);
      total += m[j];
    }
    // Generalized-KL projection onto the mass interval: rescale to the
    // nearest endpoint.
    double scale = 1.0;
    if (total < problem.mass_lower()) {
      scale = problem.mass_lower() / total;
    } else if (total > problem.mass_upper()) {
      scale = problem.mass_upper() / total;
    }
    for (double& mj : m) mj *= scale;
  }
  for (double& mj : result.m_bar) mj /= steps;
  absl::StatusOr<WorstCase> final_wc = WorstCaseF(problem, result.m_bar);
  if (!final_wc.ok()) return final_wc.status();
  result.f_bar = final_wc->f;
  return result;
}

absl::StatusOr<std::vector<double>> BestUniformBaseMeasure(
    const BaseMeasureProblem& problem) {
  const int kv = problem.cost().output_size();
  auto f_at = [&](double s) -> absl::StatusOr<double> {
    std::vector<double> m(kv, s);
    absl::StatusOr<WorstCase> wc = WorstCaseF(problem, m);
    if (!wc.ok()) return wc.status();
    return wc->f;
  };
  double lo = problem.mass_lower() / kv;
  double hi = problem.mass_upper() / kv;
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - ratio * (hi - lo);
  double x2 = lo + ratio * (hi - lo);
  absl::StatusOr<double> f1 = f_at(x1);
  absl::StatusOr<double> f2 = f_at(x2);
  if (!f1.ok()) return f1.status();
  if (!f2.ok()) return f2.status();
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    if (*f1 <= *f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - ratio * (hi - lo);
      f1 = f_at(x1);
      if (!f1.ok()) return f1.status();
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + ratio * (hi - lo);
      f2 = f_at(x2);
      if (!f2.ok()) return f2.status();
    }
  }
  // The optimum can sit on an endpoint; compare against both.
  double best_s = 0.5 * (lo + hi);
  absl::StatusOr<double> best = f_at(best_s);
  if (!best.ok()) return best.status();
  for (double s : {problem.mass_lower() / kv, problem.mass_upper() / kv}) {
    absl::StatusOr<double> fs = f_at(s);
    if (!fs.ok()) return fs.status();
    if (*fs < *best) {
      best = fs;
      best_s = s;
    }
  }
  return std::vector<double>(kv, best_s);
}

}  // namespace wproj
