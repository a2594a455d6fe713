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

#include "wproj/bench.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <memory>
#include <set>

#include "absl/strings/str_cat.h"
#include "json.hpp"
#include "parallel.h"
#include "wproj/base_measure.h"
#include "wproj/baselines.h"
#include "wproj/exact_solver.h"
#include "wproj/io.h"
#include "wproj/polytope.h"
#include "wproj/random.h"

namespace wproj {
namespace {

using ojson = nlohmann::ordered_json;

constexpr double kContainmentTolerance = 1e-9;

const std::set<std::string>& KnownMechanisms() {
  static const std::set<std::string> names = {"wpm", "wpm-exact", "kpm",
                                              "expmech"};
  return names;
}

const std::set<std::string>& KnownBaseMeasures() {
  static const std::set<std::string> names = {"kpm", "uniform", "best-uniform",
                                              "optimized"};
  return names;
}

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double Millis() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

struct Outcome {
  Distribution nu;
  int iterations = 0;
};

absl::StatusOr<Outcome> RunMechanism(
    const CostMatrix& cost, const MechanismSpec& spec, const Distribution& mu,
    const std::function<void(const IterationState&)>& observer = nullptr) {
  if (spec.name == "wpm" || spec.name == "wpm-exact") {
    absl::StatusOr<LdpPolytope> q = LdpPolytope::Create(spec.m, spec.epsilon);
    if (!q.ok()) return q.status();
    if (spec.name == "wpm-exact" || spec.lambda == 0.0) {
      absl::StatusOr<ExactProjection> proj = ProjectExact(cost, mu, *q);
      if (!proj.ok()) return proj.status();
      return Outcome{std::move(proj->nu), 0};
    }
    EntropicOptions options;
    options.lambda = spec.lambda;
    options.stop = spec.stop;
    options.compute_birkhoff = false;
    options.observer = observer;
    absl::StatusOr<EntropicProjection> proj =
        ProjectEntropic(cost, mu, *q, options);
    if (!proj.ok()) return proj.status();
    return Outcome{std::move(proj->nu), proj->report.iterations};
  }
  if (spec.name == "kpm") {
    if (cost.input_size() != cost.output_size()) {
      return absl::InvalidArgumentError("kpm needs matched supports");
    }
    absl::StatusOr<Distribution> out =
        KpmTransform(KpmParams{cost.input_size(), spec.epsilon}, mu);
    if (!out.ok()) return out.status();
    return Outcome{*std::move(out), 0};
  }
  if (spec.name == "expmech") {
    absl::StatusOr<Distribution> out = ExpMechanism(
        ExpMechParams{cost, spec.epsilon, DefaultSensitivity(cost)}, mu);
    if (!out.ok()) return out.status();
    return Outcome{*std::move(out), 0};
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown mechanism '", spec.name, "'"));
}

absl::StatusOr<std::vector<double>> ChooseBaseMeasure(
    const CostMatrix& cost, const ExperimentConfig& config, double epsilon) {
  const int kv = cost.output_size();
  if (config.base_measure == "kpm") {
    if (cost.input_size() != kv) {
      return absl::InvalidArgumentError(
          "the kpm base measure needs matched supports");
    }
    return KpmBaseMeasure(KpmParams{kv, epsilon});
  }
  if (config.base_measure == "uniform") {
    return std::vector<double>(kv, 1.0 / kv);
  }
  absl::StatusOr<BaseMeasureProblem> problem =
      BaseMeasureProblem::Create(cost, epsilon);
  if (!problem.ok()) return problem.status();
  if (config.base_measure == "best-uniform") {
    return BestUniformBaseMeasure(*problem);
  }
  MirrorDescentOptions options;
  options.iterations = config.md_iters;
  absl::StatusOr<MirrorDescentResult> md =
      OptimizeBaseMeasure(*problem, options);
  if (!md.ok()) return md.status();
  return std::move(md->m_bar);
}

// Collects per-task statuses and returns the first failure in index order.
absl::Status FirstError(const std::vector<absl::Status>& statuses) {
  for (const absl::Status& s : statuses) {
    if (!s.ok()) return s;
  }
  return absl::OkStatus();
}

struct Cell {
  std::string mechanism;
  int eps_index = 0;
  std::optional<double> lambda;
};

struct CellOutput {
  std::vector<ResultRow> rows;
  CellAudit audit;
  std::vector<ConvergencePoint> trace;
};

// Shared by the ring and grid experiments.
absl::StatusOr<BenchResult> RunProjectionExperiment(
    const ExperimentConfig& config, const CostMatrix& cost,
    const std::vector<Distribution>& inputs) {
  BenchResult result;
  result.config = config;
  const int ne = static_cast<int>(config.epsilons.size());
  const int nd = static_cast<int>(inputs.size());
  const int k = cost.input_size();
  const int kv = cost.output_size();

  // Base measures, one per epsilon.
  std::vector<std::vector<double>> m(ne);
  {
    std::vector<absl::Status> status(ne);
    internal::ParallelFor(ne, config.threads, [&](int e) {
      absl::StatusOr<std::vector<double>> me =
          ChooseBaseMeasure(cost, config, config.epsilons[e]);
      if (me.ok()) {
        m[e] = *std::move(me);
      } else {
        status[e] = me.status();
      }
    });
    if (absl::Status s = FirstError(status); !s.ok()) return s;
  }
  for (int e = 0; e < ne; ++e) {
    result.base_measures.push_back({config.epsilons[e], m[e]});
  }

  // Exact projections, the reference for entropic gaps.
  const bool has_wpm =
      std::count(config.mechanisms.begin(), config.mechanisms.end(), "wpm") +
          std::count(config.mechanisms.begin(), config.mechanisms.end(),
                     "wpm-exact") >
      0;
  std::vector<double> exact_w(static_cast<std::size_t>(ne) * nd, 0.0);
  if (has_wpm) {
    std::vector<absl::Status> status(ne * nd);
    internal::ParallelFor(ne * nd, config.threads, [&](int t) {
      const int e = t / nd;
      const int d = t % nd;
      MechanismSpec spec{"wpm-exact", config.epsilons[e], 0.0, m[e],
                         config.stop};
      absl::StatusOr<Outcome> out = RunMechanism(cost, spec, inputs[d]);
      if (!out.ok()) {
        status[t] = out.status();
        return;
      }
      absl::StatusOr<double> w =
          WassersteinDistance(cost, inputs[d].probs(), out->nu.probs());
      if (!w.ok()) {
        status[t] = w.status();
        return;
      }
      exact_w[t] = *w;
    });
    if (absl::Status s = FirstError(status); !s.ok()) return s;
  }

  std::vector<Cell> cells;
  for (const std::string& name : config.mechanisms) {
    for (int e = 0; e < ne; ++e) {
      if (name == "wpm") {
        for (double lambda : config.lambdas) cells.push_back({name, e, lambda});
      } else if (name == "wpm-exact") {
        cells.push_back({name, e, 0.0});
      } else {
        cells.push_back({name, e, std::nullopt});
      }
    }
  }

  const int nc = static_cast<int>(cells.size());
  std::vector<CellOutput> outputs(nc);
  std::vector<absl::Status> status(nc);
  internal::ParallelFor(nc, config.threads, [&](int c) {
    const Cell& cell = cells[c];
    const double eps = config.epsilons[cell.eps_index];
    MechanismSpec spec{cell.mechanism, eps, cell.lambda.value_or(0.0),
                       m[cell.eps_index], config.stop};
    const bool polytope_mech = cell.lambda.has_value();
    const bool entropic =
        cell.mechanism == "wpm" && cell.lambda.value_or(0.0) > 0.0;
    CellOutput& out = outputs[c];
    std::vector<Distribution> produced;

    for (int d = 0; d < nd; ++d) {
      std::vector<std::vector<double>> trace_q;
      std::vector<double> trace_res;
      std::function<void(const IterationState&)> observer;
      if (entropic && d == 0 && config.trace_iters > 0) {
        observer = [&](const IterationState& state) {
          if (static_cast<int>(trace_q.size()) >= config.trace_iters) return;
          trace_q.emplace_back(state.q.begin(), state.q.end());
          trace_res.push_back(state.hilbert_residual);
        };
      }
      Stopwatch clock;
      absl::StatusOr<Outcome> run =
          RunMechanism(cost, spec, inputs[d], observer);
      const double millis = clock.Millis();
      if (!run.ok()) {
        status[c] = run.status();
        return;
      }
      absl::StatusOr<double> w =
          WassersteinDistance(cost, inputs[d].probs(), run->nu.probs());
      if (!w.ok()) {
        status[c] = w.status();
        return;
      }
      ResultRow row;
      row.mechanism = cell.mechanism;
      row.epsilon = eps;
      row.lambda = cell.lambda;
      row.input = d;
      row.wasserstein_p = *w;
      row.iterations = run->iterations;
      row.runtime_ms = millis;
      if (polytope_mech) {
        row.gap_vs_exact = *w - exact_w[cell.eps_index * nd + d];
        row.gap_bound = EntropicGapBound(*cell.lambda, k, kv, cost.p());
      }
      out.rows.push_back(row);
      produced.push_back(std::move(run->nu));

      for (std::size_t t = 0; t < trace_q.size(); ++t) {
        absl::StatusOr<double> wt =
            WassersteinDistance(cost, inputs[d].probs(), trace_q[t]);
        if (!wt.ok()) {
          status[c] = wt.status();
          return;
        }
        out.trace.push_back(
            {eps, *cell.lambda, static_cast<int>(t), trace_res[t], *wt});
      }
    }

    CellAudit& audit = out.audit;
    audit.mechanism = cell.mechanism;
    audit.epsilon = eps;
    audit.lambda = cell.lambda;
    audit.pass = true;
    if (config.audit) {
      std::vector<Distribution> audited;
      audit.dirac_inputs = k <= config.audit_dirac_max;
      if (audit.dirac_inputs) {
        for (int i = 0; i < k; ++i) {
          absl::StatusOr<Outcome> run =
              RunMechanism(cost, spec, Distribution::Dirac(k, i));
          if (!run.ok()) {
            status[c] = run.status();
            return;
          }
          audited.push_back(std::move(run->nu));
        }
      }
      audited.insert(audited.end(), produced.begin(), produced.end());
      absl::StatusOr<AuditReport> report = AuditOutputs(audited, eps);
      if (!report.ok()) {
        status[c] = report.status();
        return;
      }
      audit.report = *report;
      audit.pass = report->pass;
      std::vector<double> box;
      if (polytope_mech) {
        box = m[cell.eps_index];
      } else if (cell.mechanism == "kpm") {
        box = KpmBaseMeasure(KpmParams{k, eps});
      }
      if (!box.empty()) {
        absl::StatusOr<LdpPolytope> q = LdpPolytope::Create(box, eps);
        if (!q.ok()) {
          status[c] = q.status();
          return;
        }
        bool inside = true;
        for (const Distribution& nu : audited) {
          absl::StatusOr<bool> in =
              Contains(*q, nu.probs(), kContainmentTolerance);
          if (!in.ok()) {
            status[c] = in.status();
            return;
          }
          inside = inside && *in;
        }
        audit.in_polytope = inside;
        audit.pass = audit.pass && inside;
      }
    }
    for (ResultRow& row : out.rows) row.audit_pass = audit.pass;
  });
  if (absl::Status s = FirstError(status); !s.ok()) return s;

  for (CellOutput& out : outputs) {
    result.rows.insert(result.rows.end(), out.rows.begin(), out.rows.end());
    result.audits.push_back(std::move(out.audit));
    result.convergence.insert(result.convergence.end(), out.trace.begin(),
                              out.trace.end());
  }
  return result;
}

// Synthetic check-ins: a few Gaussian hotspots on the grid, sampled and
// histogrammed.
Distribution SyntheticCheckins(const GridSpace& grid, int checkins,
                               std::uint64_t seed) {
  const int k = grid.rows * grid.cols;
  SplitMix64 rng(seed);
  constexpr int kHotspots = 3;
  constexpr double kSpread = 1.5;  // in cells
  std::vector<double> weights = SampleDirichlet(kHotspots, 1.0, rng);
  std::vector<double> intensity(k, 0.0);
  for (int h = 0; h < kHotspots; ++h) {
    const int center = std::min(k - 1, static_cast<int>(rng.Uniform() * k));
    const int cr = center / grid.cols;
    const int cc = center % grid.cols;
    for (int c = 0; c < k; ++c) {
      const double dr = c / grid.cols - cr;
      const double dc = c % grid.cols - cc;
      intensity[c] +=
          weights[h] * std::exp(-(dr * dr + dc * dc) / (2 * kSpread * kSpread));
    }
  }
  double total = 0.0;
  for (double x : intensity) total += x;
  for (double& x : intensity) x /= total;
  absl::StatusOr<Distribution> shape = Distribution::Create(intensity);
  std::vector<double> hist(k, 0.0);
  for (int idx : Sample(*shape, DeriveSeed(seed, 1), checkins)) {
    hist[idx] += 1.0 / checkins;
  }
  double sum = 0.0;
  for (double x : hist) sum += x;
  for (double& x : hist) x /= sum;
  return *Distribution::Create(std::move(hist));
}

ojson OptionalJson(const std::optional<double>& x) {
  return x.has_value() ? ojson(*x) : ojson(nullptr);
}

std::string CsvNumber(double x) { return ojson(x).dump(); }

}  // namespace

absl::StatusOr<ExperimentConfig> DefaultConfig(const std::string& experiment) {
  ExperimentConfig config;
  config.experiment = experiment;
  if (experiment == "ring") return config;
  if (experiment == "grid") {
    config.p = 1.0;
    config.epsilons = {1.0, 2.0, 5.0};
    config.lambdas = {0.1};
    config.base_measure = "best-uniform";
    config.trace_iters = 0;
    return config;
  }
  if (experiment == "worst-case") {
    config.epsilons = {1.0, 2.0, 5.0};
    config.base_measure = "optimized";
    return config;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown experiment '", experiment, "'"));
}

absl::StatusOr<ExperimentConfig> ParseConfigJson(const std::string& text) {
  const ojson j = ojson::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) {
    return absl::InvalidArgumentError("config must be a JSON object");
  }
  absl::StatusOr<ExperimentConfig> config =
      DefaultConfig(j.value("experiment", std::string("ring")));
  if (!config.ok()) return config.status();
  ExperimentConfig& c = *config;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "experiment") {
      } else if (key == "k") {
        c.k = value.get<int>();
      } else if (key == "ks") {
        c.ks = value.get<std::vector<int>>();
      } else if (key == "grid_rows") {
        c.grid_rows = value.get<int>();
      } else if (key == "grid_cols") {
        c.grid_cols = value.get<int>();
      } else if (key == "cell_size") {
        c.cell_size = value.get<double>();
      } else if (key == "p") {
        c.p = value.get<double>();
      } else if (key == "epsilons") {
        c.epsilons = value.get<std::vector<double>>();
      } else if (key == "epsilon") {
        c.epsilons = {value.get<double>()};
      } else if (key == "lambdas") {
        c.lambdas = value.get<std::vector<double>>();
      } else if (key == "lambda") {
        c.lambdas = {value.get<double>()};
      } else if (key == "mechanisms") {
        c.mechanisms = value.get<std::vector<std::string>>();
      } else if (key == "base_measure") {
        c.base_measure = value.get<std::string>();
      } else if (key == "seed") {
        c.seed = value.get<std::uint64_t>();
      } else if (key == "num_inputs") {
        c.num_inputs = value.get<int>();
      } else if (key == "concentration") {
        c.concentration = value.get<double>();
      } else if (key == "checkins") {
        c.checkins = value.get<int>();
      } else if (key == "md_iters") {
        c.md_iters = value.get<int>();
      } else if (key == "tol") {
        c.stop.tol = value.get<double>();
      } else if (key == "max_iters") {
        c.stop.max_iters = value.get<int>();
      } else if (key == "trace_iters") {
        c.trace_iters = value.get<int>();
      } else if (key == "audit") {
        c.audit = value.get<bool>();
      } else if (key == "audit_dirac_max") {
        c.audit_dirac_max = value.get<int>();
      } else if (key == "threads") {
        c.threads = value.get<int>();
      } else if (key == "out_dir") {
        c.out_dir = value.get<std::string>();
      } else {
        return absl::InvalidArgumentError(
            absl::StrCat("unknown config key '", key, "'"));
      }
    }
  } catch (const ojson::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("bad config: ", e.what()));
  }
  if (absl::Status s = ValidateConfig(c); !s.ok()) return s;
  return config;
}

// Run-independent settings only: out_dir and threads do not affect results.
std::string ConfigToJson(const ExperimentConfig& c) {
  ojson j;
  j["experiment"] = c.experiment;
  if (c.experiment == "ring") j["k"] = c.k;
  if (c.experiment == "worst-case") j["ks"] = c.ks;
  if (c.experiment == "grid") {
    j["grid_rows"] = c.grid_rows;
    j["grid_cols"] = c.grid_cols;
    j["cell_size"] = c.cell_size;
    j["checkins"] = c.checkins;
  }
  j["p"] = c.p;
  j["epsilons"] = c.epsilons;
  j["lambdas"] = c.lambdas;
  j["mechanisms"] = c.mechanisms;
  j["base_measure"] = c.base_measure;
  j["seed"] = c.seed;
  j["num_inputs"] = c.num_inputs;
  j["concentration"] = c.concentration;
  j["md_iters"] = c.md_iters;
  j["tol"] = c.stop.tol;
  j["max_iters"] = c.stop.max_iters;
  j["trace_iters"] = c.trace_iters;
  j["audit"] = c.audit;
  j["audit_dirac_max"] = c.audit_dirac_max;
  return j.dump();
}

absl::Status ValidateConfig(const ExperimentConfig& c) {
  if (c.experiment != "ring" && c.experiment != "grid" &&
      c.experiment != "worst-case") {
    return absl::InvalidArgumentError(
        absl::StrCat("unknown experiment '", c.experiment, "'"));
  }
  if (c.epsilons.empty() || c.lambdas.empty() || c.mechanisms.empty()) {
    return absl::InvalidArgumentError(
        "epsilon, lambda and mechanism lists must be nonempty");
  }
  for (double e : c.epsilons) {
    if (!(e > 0.0) || !std::isfinite(e)) {
      return absl::InvalidArgumentError(
          absl::StrCat("epsilon must be > 0, got ", e));
    }
  }
  for (double l : c.lambdas) {
    if (!(l >= 0.0) || !std::isfinite(l)) {
      return absl::InvalidArgumentError(
          absl::StrCat("lambda must be >= 0, got ", l));
    }
  }
  for (const std::string& name : c.mechanisms) {
    if (!KnownMechanisms().contains(name)) {
      return absl::InvalidArgumentError(
          absl::StrCat("unknown mechanism '", name, "'"));
    }
  }
  if (!KnownBaseMeasures().contains(c.base_measure)) {
    return absl::InvalidArgumentError(
        absl::StrCat("unknown base measure '", c.base_measure, "'"));
  }
  if (!(c.p >= 1.0)) return absl::InvalidArgumentError("p must be >= 1");
  if (c.k < 2) return absl::InvalidArgumentError("k must be >= 2");
  if (c.ks.empty()) return absl::InvalidArgumentError("ks must be nonempty");
  for (int k : c.ks) {
    if (k < 2) return absl::InvalidArgumentError("ks entries must be >= 2");
  }
  if (c.grid_rows < 1 || c.grid_cols < 1 || c.grid_rows * c.grid_cols < 2 ||
      !(c.cell_size > 0.0)) {
    return absl::InvalidArgumentError("bad grid dimensions");
  }
  if (c.num_inputs < 1 || c.md_iters < 1 || c.stop.max_iters < 1 ||
      c.trace_iters < 0 || c.checkins < 1 || !(c.concentration > 0.0) ||
      !(c.stop.tol > 0.0)) {
    return absl::InvalidArgumentError("bad iteration or sampling settings");
  }
  return absl::OkStatus();
}

absl::StatusOr<Mechanism> MakeMechanism(const CostMatrix& cost,
                                        const MechanismSpec& spec) {
  if (!KnownMechanisms().contains(spec.name)) {
    return absl::InvalidArgumentError(
        absl::StrCat("unknown mechanism '", spec.name, "'"));
  }
  if (!(spec.epsilon > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon must be > 0, got ", spec.epsilon));
  }
  if (spec.name == "wpm" || spec.name == "wpm-exact") {
    if (static_cast<int>(spec.m.size()) != cost.output_size()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "m has length ", spec.m.size(), ", expected ", cost.output_size()));
    }
    absl::StatusOr<LdpPolytope> q = LdpPolytope::Create(spec.m, spec.epsilon);
    if (!q.ok()) return q.status();
  }
  auto shared = std::make_shared<const CostMatrix>(cost);
  return Mechanism(
      [shared, spec](const Distribution& mu) -> absl::StatusOr<Distribution> {
        absl::StatusOr<Outcome> out = RunMechanism(*shared, spec, mu);
        if (!out.ok()) return out.status();
        return std::move(out->nu);
      });
}

absl::StatusOr<BenchResult> RunSyntheticRing(const ExperimentConfig& config) {
  if (absl::Status s = ValidateConfig(config); !s.ok()) return s;
  absl::StatusOr<CostMatrix> cost =
      BuildCostMatrix(RingSpace{config.k}, config.p);
  if (!cost.ok()) return cost.status();
  std::vector<Distribution> inputs;
  for (int d = 0; d < config.num_inputs; ++d) {
    SplitMix64 rng(DeriveSeed(config.seed, d));
    absl::StatusOr<Distribution> mu = Distribution::Create(
        SampleDirichlet(config.k, config.concentration, rng));
    if (!mu.ok()) return mu.status();
    inputs.push_back(*std::move(mu));
  }
  return RunProjectionExperiment(config, *cost, inputs);
}

absl::StatusOr<BenchResult> RunSyntheticGrid(const ExperimentConfig& config) {
  if (absl::Status s = ValidateConfig(config); !s.ok()) return s;
  const GridSpace grid{config.grid_rows, config.grid_cols, config.cell_size};
  absl::StatusOr<CostMatrix> cost = BuildCostMatrix(grid, config.p);
  if (!cost.ok()) return cost.status();
  std::vector<Distribution> inputs;
  for (int d = 0; d < config.num_inputs; ++d) {
    inputs.push_back(
        SyntheticCheckins(grid, config.checkins, DeriveSeed(config.seed, d)));
  }
  return RunProjectionExperiment(config, *cost, inputs);
}

absl::StatusOr<BenchResult> RunWorstCaseTable(const ExperimentConfig& config) {
  if (absl::Status s = ValidateConfig(config); !s.ok()) return s;
  BenchResult result;
  result.config = config;
  const int nk = static_cast<int>(config.ks.size());
  const int ne = static_cast<int>(config.epsilons.size());
  auto listed = [&](const char* name) {
    return std::find(config.mechanisms.begin(), config.mechanisms.end(),
                     name) != config.mechanisms.end();
  };
  const bool wpm = listed("wpm") || listed("wpm-exact");

  std::vector<std::vector<WorstCaseRow>> tables(nk * ne);
  std::vector<absl::Status> status(nk * ne);
  internal::ParallelFor(nk * ne, config.threads, [&](int t) {
    const int k = config.ks[t / ne];
    const double eps = config.epsilons[t % ne];
    absl::StatusOr<CostMatrix> cost = BuildCostMatrix(RingSpace{k}, config.p);
    if (!cost.ok()) {
      status[t] = cost.status();
      return;
    }
    absl::StatusOr<BaseMeasureProblem> problem =
        BaseMeasureProblem::Create(*cost, eps);
    if (!problem.ok()) {
      status[t] = problem.status();
      return;
    }
    auto& rows = tables[t];
    if (wpm) {
      Stopwatch clock;
      MirrorDescentOptions options;
      options.iterations = config.md_iters;
      absl::StatusOr<MirrorDescentResult> md =
          OptimizeBaseMeasure(*problem, options);
      if (!md.ok()) {
        status[t] = md.status();
        return;
      }
      rows.push_back({k, eps, config.p, "wpm",
                      std::pow(md->f_bar, 1.0 / config.p), md->regret_bound,
                      clock.Millis()});
      Stopwatch uniform_clock;
      absl::StatusOr<std::vector<double>> mu = BestUniformBaseMeasure(*problem);
      absl::StatusOr<WorstCase> wc =
          mu.ok() ? WorstCaseF(*problem, *mu)
                  : absl::StatusOr<WorstCase>(mu.status());
      if (!wc.ok()) {
        status[t] = wc.status();
        return;
      }
      rows.push_back({k, eps, config.p, "wpm-uniform",
                      std::pow(wc->f, 1.0 / config.p), std::nullopt,
                      uniform_clock.Millis()});
    }
    for (const char* name : {"kpm", "expmech"}) {
      if (!listed(name)) continue;
      Stopwatch clock;
      MechanismSpec spec{name, eps, 0.0, {}, config.stop};
      double worst = 0.0;
      for (int i = 0; i < k; ++i) {
        absl::StatusOr<Outcome> out =
            RunMechanism(*cost, spec, Distribution::Dirac(k, i));
        if (!out.ok()) {
          status[t] = out.status();
          return;
        }
        // W_p^p to a Dirac is the mean cost from its atom.
        double wpp = 0.0;
        for (int j = 0; j < k; ++j) wpp += (*cost)(i, j) * out->nu[j];
        worst = std::max(worst, wpp);
      }
      rows.push_back({k, eps, config.p, name, std::pow(worst, 1.0 / config.p),
                      std::nullopt, clock.Millis()});
    }
  });
  if (absl::Status s = FirstError(status); !s.ok()) return s;
  for (auto& rows : tables) {
    result.worst_case.insert(result.worst_case.end(), rows.begin(), rows.end());
  }
  return result;
}

absl::StatusOr<BenchResult> RunExperiment(const ExperimentConfig& config) {
  if (config.experiment == "ring") return RunSyntheticRing(config);
  if (config.experiment == "grid") return RunSyntheticGrid(config);
  if (config.experiment == "worst-case") return RunWorstCaseTable(config);
  return absl::InvalidArgumentError(
      absl::StrCat("unknown experiment '", config.experiment, "'"));
}

std::string ResultsJson(const BenchResult& result) {
  ojson j;
  j["metadata"] = {{"rng", kRngName},
                   {"seed", result.config.seed},
                   {"config", ojson::parse(ConfigToJson(result.config))}};
  if (!result.base_measures.empty()) {
    ojson bms = ojson::array();
    for (const BaseMeasureRecord& b : result.base_measures) {
      bms.push_back({{"epsilon", b.epsilon}, {"m", b.m}});
    }
    j["base_measures"] = std::move(bms);
  }
  if (!result.rows.empty()) {
    ojson rows = ojson::array();
    for (const ResultRow& r : result.rows) {
      rows.push_back({{"mechanism", r.mechanism},
                      {"epsilon", r.epsilon},
                      {"lambda", OptionalJson(r.lambda)},
                      {"input", r.input},
                      {"wasserstein_p", r.wasserstein_p},
                      {"iterations", r.iterations},
                      {"gap_vs_exact", OptionalJson(r.gap_vs_exact)},
                      {"gap_bound", OptionalJson(r.gap_bound)},
                      {"audit_pass", r.audit_pass}});
    }
    j["rows"] = std::move(rows);
  }
  if (!result.audits.empty()) {
    ojson audits = ojson::array();
    for (const CellAudit& a : result.audits) {
      ojson entry = {{"mechanism", a.mechanism},
                     {"epsilon", a.epsilon},
                     {"lambda", OptionalJson(a.lambda)},
                     {"report", ojson::parse(AuditReportJson(a.report))},
                     {"dirac_inputs", a.dirac_inputs}};
      entry["in_polytope"] =
          a.in_polytope.has_value() ? ojson(*a.in_polytope) : ojson(nullptr);
      entry["pass"] = a.pass;
      audits.push_back(std::move(entry));
    }
    j["audits"] = std::move(audits);
  }
  if (!result.worst_case.empty()) {
    ojson table = ojson::array();
    for (const WorstCaseRow& w : result.worst_case) {
      table.push_back({{"k", w.k},
                       {"epsilon", w.epsilon},
                       {"p", w.p},
                       {"mechanism", w.mechanism},
                       {"utility", w.utility},
                       {"regret_bound", OptionalJson(w.regret_bound)}});
    }
    j["worst_case"] = std::move(table);
  }
  return j.dump(2) + "\n";
}

std::string ConvergenceCsv(const BenchResult& result) {
  std::string out =
      "epsilon,lambda,iteration,hilbert_residual,wasserstein_to_input\n";
  for (const ConvergencePoint& c : result.convergence) {
    absl::StrAppend(&out, CsvNumber(c.epsilon), ",", CsvNumber(c.lambda), ",",
                    c.iteration, ",", CsvNumber(c.hilbert_residual), ",",
                    CsvNumber(c.wasserstein_to_input), "\n");
  }
  return out;
}

std::string TimingsCsv(const BenchResult& result) {
  std::string out = "table,mechanism,k,epsilon,lambda,input,runtime_ms\n";
  const int k = result.config.experiment == "grid"
                    ? result.config.grid_rows * result.config.grid_cols
                    : result.config.k;
  for (const ResultRow& r : result.rows) {
    absl::StrAppend(&out, "rows,", r.mechanism, ",", k, ",",
                    CsvNumber(r.epsilon), ",",
                    r.lambda ? CsvNumber(*r.lambda) : "", ",", r.input, ",",
                    CsvNumber(r.runtime_ms), "\n");
  }
  for (const WorstCaseRow& w : result.worst_case) {
    absl::StrAppend(&out, "worst_case,", w.mechanism, ",", w.k, ",",
                    CsvNumber(w.epsilon), ",,,", CsvNumber(w.runtime_ms), "\n");
  }
  return out;
}

absl::Status WriteBenchOutputs(const BenchResult& result,
                               const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    return absl::PermissionDeniedError(
        absl::StrCat("cannot create ", dir, ": ", ec.message()));
  }
  const std::filesystem::path base(dir);
  if (absl::Status s =
          WriteFile((base / "results.json").string(), ResultsJson(result));
      !s.ok()) {
    return s;
  }
  if (absl::Status s = WriteFile((base / "convergence.csv").string(),
                                 ConvergenceCsv(result));
      !s.ok()) {
    return s;
  }
  return WriteFile((base / "timings.csv").string(), TimingsCsv(result));
}

}  // namespace wproj
