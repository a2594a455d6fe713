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

#include "wproj/entropic_solver.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/strings/str_cat.h"

namespace wproj {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Below this ratio lambda / max C the auto mode switches to log-sum-exp.
constexpr double kLogDomainThreshold = 0.05;

// Largest |log u - f|, |log v - g| tolerated before refolding the kernel.
constexpr double kAbsorbThreshold = 30.0;

// Continuation stages: lambda grows by this factor per stage up to
// kLogDomainThreshold * max C, and warm-up stages stop at this residual.
constexpr double kScalingFactor = 10.0;
constexpr double kStageTolerance = 1e-6;

double LogSumExp(std::span<const double> x) {
  double hi = -kInf;
  for (double v : x) hi = std::max(hi, v);
  if (hi == -kInf) return -kInf;
  // Terms below e^-60 of the largest cannot move the rounded sum.
  double acc = 0.0;
  for (double v : x) {
    const double d = v - hi;
    if (d > -60.0) acc += std::exp(d);
  }
  return hi + std::log(acc);
}

// max_i(a_i - b_i) - min_i(a_i - b_i): the Hilbert distance of exp(a), exp(b).
double LogHilbert(std::span<const double> a, std::span<const double> b) {
  double hi = -kInf;
  double lo = kInf;
  for (std::size_t i = 0; i < a.size(); ++i) {
    hi = std::max(hi, a[i] - b[i]);
    lo = std::min(lo, a[i] - b[i]);
  }
  return hi - lo;
}

// Delta(A) from log-entries, maximized over pairs of rows.
double LogCrossRatioSpread(const Matrix& log_a) {
  double spread = 0.0;
  for (int i = 0; i < log_a.rows(); ++i) {
    for (int j = i + 1; j < log_a.rows(); ++j) {
      spread = std::max(spread, LogHilbert(log_a.row(i), log_a.row(j)));
    }
  }
  return spread;
}

struct Support {
  std::vector<int> rows;
  std::vector<int> cols;
};

}  // namespace

absl::StatusOr<GibbsKernel> GibbsKernel::Create(const CostMatrix& cost,
                                                double lambda) {
  if (!(lambda > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("lambda must be > 0, got ", lambda));
  }
  const Matrix& c = cost.costs();
  std::vector<double> logits(c.data().size());
  for (std::size_t t = 0; t < logits.size(); ++t) {
    logits[t] = -c.data()[t] / lambda;
  }
  GibbsKernel kernel;
  kernel.lambda = lambda;
  kernel.log_z = LogSumExp(logits);
  kernel.k = Matrix(c.rows(), c.cols());
  for (std::size_t t = 0; t < logits.size(); ++t) {
    kernel.k.data()[t] = std::exp(logits[t] - kernel.log_z);
  }
  for (int i = 0; i < c.rows(); ++i) {
    double row = 0.0;
    for (double x : kernel.k.row(i)) row += x;
    if (row == 0.0) {
      return absl::ResourceExhaustedError(absl::StrCat(
          "Gibbs kernel row ", i, " underflows at lambda = ", lambda,
          "; use the log-domain mode"));
    }
  }
  for (int j = 0; j < c.cols(); ++j) {
    double col = 0.0;
    for (int i = 0; i < c.rows(); ++i) col += kernel.k(i, j);
    if (col == 0.0) {
      return absl::ResourceExhaustedError(absl::StrCat(
          "Gibbs kernel column ", j, " underflows at lambda = ", lambda,
          "; use the log-domain mode"));
    }
  }
  return kernel;
}

absl::StatusOr<double> HilbertDistance(std::span<const double> x,
                                       std::span<const double> y) {
  if (x.size() != y.size() || x.empty()) {
    return absl::InvalidArgumentError("vectors must be nonempty and same size");
  }
  std::vector<double> lx(x.size()), ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
      return absl::InvalidArgumentError(
          absl::StrCat("entries must be positive; index ", i));
    }
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  return LogHilbert(lx, ly);
}

absl::StatusOr<double> BirkhoffCoefficient(const Matrix& a) {
  Matrix log_a(a.rows(), a.cols());
  for (std::size_t t = 0; t < a.data().size(); ++t) {
    if (!(a.data()[t] > 0.0)) {
      return absl::InvalidArgumentError("matrix entries must be positive");
    }
    log_a.data()[t] = std::log(a.data()[t]);
  }
  return std::tanh(LogCrossRatioSpread(log_a) / 4.0);
}

double GibbsBirkhoffCoefficient(const Matrix& cost, double lambda) {
  Matrix log_k(cost.rows(), cost.cols());
  for (std::size_t t = 0; t < cost.data().size(); ++t) {
    log_k.data()[t] = -cost.data()[t] / lambda;
  }
  return std::tanh(LogCrossRatioSpread(log_k) / 4.0);
}

double EntropicGapBound(double lambda, int k, int kv, double p) {
  if (lambda <= 0.0) return 0.0;
  return std::pow(lambda * std::log(static_cast<double>(k) * kv), 1.0 / p);
}

absl::StatusOr<EntropicProjection> ProjectEntropic(
    const CostMatrix& cost, const Distribution& mu, const LdpPolytope& q,
    const EntropicOptions& options) {
  const int k = cost.input_size();
  const int kv = cost.output_size();
  if (mu.size() != k) {
    return absl::InvalidArgumentError(
        absl::StrCat("mu has length ", mu.size(), ", expected ", k));
  }
  if (q.size() != kv) {
    return absl::InvalidArgumentError(
        absl::StrCat("polytope has ", q.size(), " coordinates, expected ", kv));
  }
  if (!(options.lambda > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("lambda must be > 0, got ", options.lambda));
  }
  if (options.stop.max_iters < 1) {
    return absl::InvalidArgumentError("max_iters must be >= 1");
  }
  if (!options.initial_v.empty() &&
      static_cast<int>(options.initial_v.size()) != kv) {
    return absl::InvalidArgumentError("initial_v must have length k_v");
  }

  // Restrict to supp(mu) x supp(m); dropped coordinates come back as zeros.
  Support support;
  for (int i = 0; i < k; ++i) {
    if (mu[i] > 0.0) support.rows.push_back(i);
  }
  std::vector<double> m_restricted;
  for (int j = 0; j < kv; ++j) {
    if (q.m()[j] > 0.0) {
      support.cols.push_back(j);
      m_restricted.push_back(q.m()[j]);
    }
  }
  const int nr = static_cast<int>(support.rows.size());
  const int nc = static_cast<int>(support.cols.size());
  absl::StatusOr<LdpPolytope> q_restricted =
      LdpPolytope::Create(std::move(m_restricted), q.epsilon());
  if (!q_restricted.ok()) return q_restricted.status();

  Matrix c_restricted(nr, nc);
  for (int a = 0; a < nr; ++a) {
    for (int b = 0; b < nc; ++b) {
      c_restricted(a, b) = cost(support.rows[a], support.cols[b]);
    }
  }
  std::vector<double> log_mu(nr);
  for (int a = 0; a < nr; ++a) log_mu[a] = std::log(mu[support.rows[a]]);

  SolveReport report;
  report.bisection_tolerance = options.projection.bisection_tolerance;

  auto use_log = [&](double l) {
    return options.mode == KernelMode::kLog ||
           (options.mode == KernelMode::kAuto &&
            l < kLogDomainThreshold * cost.max_cost());
  };
  report.log_domain = use_log(options.lambda);

  // State of the current continuation stage.
  double lambda = options.lambda;
  bool log_domain = report.log_domain;
  bool final_stage = true;
  StoppingRule stop = options.stop;
  // Log-kernel up to the constant log Z, which cancels in every update.
  Matrix log_k, log_k_t, kernel;

  std::vector<double> log_v(nc, 0.0);
  if (!options.initial_v.empty()) {
    for (int b = 0; b < nc; ++b) {
      const double v0 = options.initial_v[support.cols[b]];
      if (!(v0 > 0.0) || !std::isfinite(v0)) {
        return absl::InvalidArgumentError("initial_v must be positive");
      }
      log_v[b] = std::log(v0);
    }
  }

  std::vector<double> log_u(nr), log_s(nc), log_v_next(nc), scratch;
  std::vector<double> v_lin(nc), u_lin(nr), s_lin(nc), kv_lin(nr);
  std::vector<double> q_prev;
  std::vector<double> q_current;
  std::vector<double> full_v, full_q;

  // Log-domain mode keeps the potentials f, g folded into a stabilized kernel
  // exp(log K_ab + f_a + g_b), so most iterations are plain products; exact
  // log-sum-exp is used whenever the folded kernel under- or overflows.
  std::vector<double> f_abs(nr, 0.0), g_abs(nc, 0.0);
  Matrix stable;
  bool absorbed = false;
  auto absorb = [&](std::span<const double> f, std::span<const double> g) {
    f_abs.assign(f.begin(), f.end());
    g_abs.assign(g.begin(), g.end());
    stable = Matrix(nr, nc);
    for (int a = 0; a < nr; ++a) {
      for (int b = 0; b < nc; ++b) {
        stable(a, b) = std::exp(log_k(a, b) + f_abs[a] + g_abs[b]);
      }
    }
    absorbed = true;
  };
  auto stabilized_step = [&]() {
    if (!absorbed) return false;
    for (int b = 0; b < nc; ++b) v_lin[b] = std::exp(log_v[b] - g_abs[b]);
    for (int a = 0; a < nr; ++a) {
      double acc = 0.0;
      const auto row = stable.row(a);
      for (int b = 0; b < nc; ++b) acc += row[b] * v_lin[b];
      if (!(acc > 0.0) || !std::isfinite(acc)) return false;
      u_lin[a] = mu[support.rows[a]] / acc;
      log_u[a] = log_mu[a] + f_abs[a] - std::log(acc);
    }
    std::fill(s_lin.begin(), s_lin.end(), 0.0);
    for (int a = 0; a < nr; ++a) {
      const auto row = stable.row(a);
      for (int b = 0; b < nc; ++b) s_lin[b] += row[b] * u_lin[a];
    }
    for (int b = 0; b < nc; ++b) {
      if (!(s_lin[b] > 0.0) || !std::isfinite(s_lin[b])) return false;
      log_s[b] = std::log(s_lin[b]) - g_abs[b];
    }
    return true;
  };

  // Small lambda converges slowly from v = 1, so the solve is warm-started
  // from the coarser problems lambda F^j, j = J..1, carrying the dual
  // potential lambda log v from one stage to the next.
  std::vector<double> stages = {options.lambda};
  if (options.lambda_scaling && options.initial_v.empty()) {
    const double coarse = kLogDomainThreshold * cost.max_cost();
    for (double l = options.lambda; l < coarse;) {
      l *= kScalingFactor;
      stages.push_back(l);
    }
    std::reverse(stages.begin(), stages.end());
  }
  for (std::size_t stage = 0; stage < stages.size(); ++stage) {
    if (stage > 0) {
      for (double& x : log_v) x *= lambda / stages[stage];
    }
    lambda = stages[stage];
    final_stage = stage + 1 == stages.size();
    log_domain = use_log(lambda);
    stop = options.stop;
    if (!final_stage) stop.tol = std::max(stop.tol, kStageTolerance);

    log_k = Matrix(nr, nc);
    for (std::size_t t = 0; t < log_k.data().size(); ++t) {
      log_k.data()[t] = -c_restricted.data()[t] / lambda;
    }
    log_k_t = log_k.Transposed();
    if (!log_domain) {
      absl::StatusOr<CostMatrix> cr =
          CostMatrix::Create(c_restricted, cost.p());
      if (!cr.ok()) return cr.status();
      absl::StatusOr<GibbsKernel> gibbs = GibbsKernel::Create(*cr, lambda);
      if (!gibbs.ok()) return gibbs.status();
      kernel = std::move(gibbs->k);
    }
    if (final_stage && options.compute_birkhoff) {
      report.birkhoff_c = std::tanh(LogCrossRatioSpread(log_k_t) / 4.0) *
                          std::tanh(LogCrossRatioSpread(log_k) / 4.0);
    }
    absorbed = false;
    q_prev.clear();

    for (int t = 0; t < stop.max_iters; ++t) {
      if (log_domain) {
        if (!stabilized_step()) {
          for (int a = 0; a < nr; ++a) {
            scratch.assign(log_k.row(a).begin(), log_k.row(a).end());
            for (int b = 0; b < nc; ++b) scratch[b] += log_v[b];
            log_u[a] = log_mu[a] - LogSumExp(scratch);
          }
          for (int b = 0; b < nc; ++b) {
            scratch.assign(log_k_t.row(b).begin(), log_k_t.row(b).end());
            for (int a = 0; a < nr; ++a) scratch[a] += log_u[a];
            log_s[b] = LogSumExp(scratch);
          }
          absorbed = false;
        }
      } else {
        for (int b = 0; b < nc; ++b) v_lin[b] = std::exp(log_v[b]);
        for (int a = 0; a < nr; ++a) {
          double acc = 0.0;
          const auto row = kernel.row(a);
          for (int b = 0; b < nc; ++b) acc += row[b] * v_lin[b];
          kv_lin[a] = acc;
          u_lin[a] = mu[support.rows[a]] / acc;
          log_u[a] = std::log(u_lin[a]);
        }
        std::fill(s_lin.begin(), s_lin.end(), 0.0);
        for (int a = 0; a < nr; ++a) {
          const auto row = kernel.row(a);
          for (int b = 0; b < nc; ++b) s_lin[b] += row[b] * u_lin[a];
        }
        for (int b = 0; b < nc; ++b) log_s[b] = std::log(s_lin[b]);
      }
      for (int b = 0; b < nc; ++b) {
        if (!std::isfinite(log_s[b])) {
          return absl::ResourceExhaustedError(absl::StrCat(
              "scaling underflow at iteration ", t, " with lambda = ", lambda,
              "; use the log-domain mode"));
        }
      }

      absl::StatusOr<KlProjection> proj =
          KlProjectLog(*q_restricted, log_s, options.projection);
      if (!proj.ok()) return proj.status();
      q_current = std::move(proj->q);
      for (int b = 0; b < nc; ++b) {
        log_v_next[b] = std::log(q_current[b]) - log_s[b];
      }

      const double residual = LogHilbert(log_v_next, log_v);
      if (!final_stage) {
        ++report.warmup_iterations;
      } else {
        report.hilbert_residuals.push_back(residual);
        if (t >= 1) {
          report.kl_residuals.push_back(KlDivergence(q_current, q_prev));
        }
        report.iterations = t + 1;
      }

      if (final_stage && options.observer) {
        full_v.assign(kv, 0.0);
        full_q.assign(kv, 0.0);
        const double shift =
            log_domain ? *std::max_element(log_v.begin(), log_v.end()) : 0.0;
        for (int b = 0; b < nc; ++b) {
          full_v[support.cols[b]] = std::exp(log_v[b] - shift);
          full_q[support.cols[b]] = q_current[b];
        }
        options.observer(IterationState{t, full_v, full_q, residual});
      }

      const bool done = residual <= stop.tol || t + 1 == stop.max_iters;
      if (done && final_stage) {
        // Row sums of diag(u) K diag(v_next) against mu.
        double gap = 0.0;
        for (int a = 0; a < nr; ++a) {
          scratch.assign(log_k.row(a).begin(), log_k.row(a).end());
          for (int b = 0; b < nc; ++b) scratch[b] += log_v_next[b];
          const double row_sum = std::exp(log_u[a] + LogSumExp(scratch));
          gap += std::abs(row_sum - mu[support.rows[a]]);
        }
        report.final_marginal_gap = gap;
        report.converged = residual <= stop.tol;
      }
      log_v.swap(log_v_next);
      if (log_domain) {
        const double shift = *std::max_element(log_v.begin(), log_v.end());
        for (double& x : log_v) x -= shift;
        double drift = 0.0;
        if (absorbed) {
          for (int a = 0; a < nr; ++a) {
            drift = std::max(drift, std::abs(log_u[a] - f_abs[a]));
          }
          for (int b = 0; b < nc; ++b) {
            drift = std::max(drift, std::abs(log_v[b] - g_abs[b]));
          }
        }
        if (!absorbed || drift > kAbsorbThreshold) absorb(log_u, log_v);
      }
      q_prev = q_current;
      if (done) break;
    }
  }

  std::vector<double> nu(kv, 0.0);
  for (int b = 0; b < nc; ++b) nu[support.cols[b]] = q_current[b];
  absl::StatusOr<Distribution> dist = Distribution::Create(std::move(nu));
  if (!dist.ok()) return dist.status();
  return EntropicProjection{*std::move(dist), std::move(report)};
}

}  // namespace wproj
