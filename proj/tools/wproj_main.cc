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

// wproj: command-line front end for the Wasserstein projection mechanism.
//
//   wproj bench ring --k 30 --eps 5 --p 2 --lambda 0.01 --seed 7 --out dir/
//   wproj project --cost c.csv --mu mu.json --m m.json --eps 5 [--lambda 0.01]
//   wproj optimize-m --cost c.csv --eps 5 --iters 1000
//   wproj sphere-m --d 2 --p 2 --eps 2
//   wproj audit --mechanism kpm --k 30 --eps 5
//   wproj cost --space ring --k 30 --p 2
//
// Every subcommand accepts --config FILE. For bench the file is an
// experiment config; elsewhere it is a JSON object keyed by long flag names.
// Flags given on the command line take precedence.

#include <cmath>
#include <cstdint>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "json.hpp"
#include "wproj/base_measure.h"
#include "wproj/bench.h"
#include "wproj/entropic_solver.h"
#include "wproj/exact_solver.h"
#include "wproj/geometry.h"
#include "wproj/io.h"
#include "wproj/polytope.h"
#include "wproj/privacy_audit.h"

namespace {

using ojson = nlohmann::ordered_json;

// Reads --config files written as flat JSON objects. Keys are attached to the
// subcommand selected on the command line.
class JsonConfig : public CLI::Config {
 public:
  explicit JsonConfig(const CLI::App* app) : app_(app) {}

  std::string to_config(const CLI::App* app, bool default_also, bool,
                        std::string) const override {
    ojson j;
    for (const CLI::Option* opt : app->get_options({})) {
      if (opt->get_lnames().empty() || !opt->get_configurable()) continue;
      const std::string name = opt->get_lnames()[0];
      if (opt->count() > 0) {
        j[name] = opt->results().size() == 1 ? ojson(opt->results()[0])
                                             : ojson(opt->results());
      } else if (default_also && !opt->get_default_str().empty()) {
        j[name] = opt->get_default_str();
      }
    }
    return j.dump(2);
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    const ojson j = ojson::parse(input, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded() || !j.is_object()) {
      throw CLI::ConversionError("config must be a JSON object");
    }
    std::vector<CLI::ConfigItem> items;
    for (const auto& [key, value] : j.items()) {
      CLI::ConfigItem item;
      item.name = key;
      if (!app_->get_subcommands().empty()) {
        item.parents = {app_->get_subcommands().front()->get_name()};
      }
      const auto add = [&](const ojson& v) {
        item.inputs.push_back(v.is_string() ? v.get<std::string>() : v.dump());
      };
      if (value.is_array()) {
        for (const ojson& v : value) add(v);
      } else {
        add(value);
      }
      items.push_back(std::move(item));
    }
    return items;
  }

 private:
  const CLI::App* app_;
};

int Fail(const absl::Status& status) {
  std::cerr << "wproj: " << status << "\n";
  return 2;
}

int Emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return 0;
  }
  absl::Status s = wproj::WriteFile(out_path, text);
  return s.ok() ? 0 : Fail(s);
}

struct BenchFlags {
  std::string experiment;
  std::string config;
  int k = 0;
  std::vector<int> ks;
  int rows = 0;
  int cols = 0;
  double cell_size = 0.0;
  double p = 0.0;
  std::vector<double> eps;
  std::vector<double> lambda;
  std::vector<std::string> mechanisms;
  std::string base_measure;
  std::uint64_t seed = 0;
  int inputs = 0;
  int md_iters = 0;
  double tol = 0.0;
  int max_iters = 0;
  int trace_iters = 0;
  bool no_audit = false;
  int threads = 0;
  std::string out;
};

int RunBench(const CLI::App& cmd, const BenchFlags& f) {
  absl::StatusOr<wproj::ExperimentConfig> config;
  if (!f.config.empty()) {
    absl::StatusOr<std::string> text = wproj::ReadFile(f.config);
    if (!text.ok()) return Fail(text.status());
    config = wproj::ParseConfigJson(*text);
    if (config.ok() && !f.experiment.empty() &&
        f.experiment != config->experiment) {
      return Fail(absl::InvalidArgumentError(
          absl::StrCat("config is for '", config->experiment, "', not '",
                       f.experiment, "'")));
    }
  } else {
    config = wproj::DefaultConfig(f.experiment.empty() ? "ring" : f.experiment);
  }
  if (!config.ok()) return Fail(config.status());
  wproj::ExperimentConfig& c = *config;
  auto given = [&](const char* name) { return cmd.count(name) > 0; };
  if (given("--k")) c.k = f.k;
  if (given("--ks")) c.ks = f.ks;
  if (given("--rows")) c.grid_rows = f.rows;
  if (given("--cols")) c.grid_cols = f.cols;
  if (given("--cell-size")) c.cell_size = f.cell_size;
  if (given("--p")) c.p = f.p;
  if (given("--eps")) c.epsilons = f.eps;
  if (given("--lambda")) c.lambdas = f.lambda;
  if (given("--mechanisms")) c.mechanisms = f.mechanisms;
  if (given("--base-measure")) c.base_measure = f.base_measure;
  if (given("--seed")) c.seed = f.seed;
  if (given("--inputs")) c.num_inputs = f.inputs;
  if (given("--md-iters")) c.md_iters = f.md_iters;
  if (given("--tol")) c.stop.tol = f.tol;
  if (given("--max-iters")) c.stop.max_iters = f.max_iters;
  if (given("--trace-iters")) c.trace_iters = f.trace_iters;
  if (given("--no-audit")) c.audit = false;
  if (given("--threads")) c.threads = f.threads;
  if (given("--out")) c.out_dir = f.out;
  if (c.out_dir.empty()) {
    return Fail(absl::InvalidArgumentError("bench needs --out"));
  }
  if (absl::Status s = wproj::ValidateConfig(c); !s.ok()) return Fail(s);

  absl::StatusOr<wproj::BenchResult> result = wproj::RunExperiment(c);
  if (!result.ok()) return Fail(result.status());
  if (absl::Status s = wproj::WriteBenchOutputs(*result, c.out_dir); !s.ok()) {
    return Fail(s);
  }
  std::cerr << "wrote " << c.out_dir << "/results.json\n";
  for (const wproj::CellAudit& a : result->audits) {
    if (!a.pass) {
      std::cerr << "audit failed: " << a.mechanism << " eps=" << a.epsilon
                << "\n";
      return 1;
    }
  }
  return 0;
}

struct ProjectFlags {
  std::string cost;
  std::string mu;
  std::string m;
  double eps = 0.0;
  double lambda = 0.0;
  double tol = 1e-10;
  int max_iters = 10000;
  std::string out;
};

int RunProject(const CLI::App& cmd, const ProjectFlags& f) {
  absl::StatusOr<wproj::CostMatrix> cost = wproj::LoadCostMatrix(f.cost);
  if (!cost.ok()) return Fail(cost.status());
  absl::StatusOr<wproj::Distribution> mu = wproj::LoadDistribution(f.mu);
  if (!mu.ok()) return Fail(mu.status());
  absl::StatusOr<wproj::VectorFile> m = wproj::LoadVector(f.m);
  if (!m.ok()) return Fail(m.status());
  double eps = f.eps;
  if (cmd.count("--eps") == 0) {
    if (!m->epsilon.has_value()) {
      return Fail(absl::InvalidArgumentError(
          "--eps is required unless the m file has an epsilon"));
    }
    eps = *m->epsilon;
  }
  absl::StatusOr<wproj::LdpPolytope> q =
      wproj::LdpPolytope::Create(m->values, eps);
  if (!q.ok()) return Fail(q.status());

  ojson j;
  wproj::Distribution nu = wproj::Distribution::Uniform(1);
  if (f.lambda > 0.0) {
    wproj::EntropicOptions options;
    options.lambda = f.lambda;
    options.stop = {f.tol, f.max_iters};
    absl::StatusOr<wproj::EntropicProjection> proj =
        wproj::ProjectEntropic(*cost, *mu, *q, options);
    if (!proj.ok()) return Fail(proj.status());
    nu = proj->nu;
    j["solver"] = "entropic";
    j["lambda"] = f.lambda;
    j["iterations"] = proj->report.iterations;
    j["warmup_iterations"] = proj->report.warmup_iterations;
    j["converged"] = proj->report.converged;
    j["log_domain"] = proj->report.log_domain;
    j["birkhoff_c"] = proj->report.birkhoff_c;
    j["gap_bound"] = wproj::EntropicGapBound(f.lambda, cost->input_size(),
                                             cost->output_size(), cost->p());
  } else {
    absl::StatusOr<wproj::ExactProjection> proj =
        wproj::ProjectExact(*cost, *mu, *q);
    if (!proj.ok()) return Fail(proj.status());
    nu = proj->nu;
    j["solver"] = "exact";
  }
  absl::StatusOr<double> w =
      wproj::WassersteinDistance(*cost, mu->probs(), nu.probs());
  if (!w.ok()) return Fail(w.status());
  j["epsilon"] = eps;
  j["nu"] = nu.probs();
  j["wasserstein_p"] = *w;
  return Emit(j.dump(2) + "\n", f.out);
}

struct OptimizeFlags {
  std::string cost;
  double eps = 0.0;
  int iters = 1000;
  double eta = 0.0;
  bool decaying = false;
  bool history = false;
  std::optional<std::uint64_t> seed;
  std::string out;
};

int RunOptimize(const CLI::App& cmd, const OptimizeFlags& f) {
  absl::StatusOr<wproj::CostMatrix> cost = wproj::LoadCostMatrix(f.cost);
  if (!cost.ok()) return Fail(cost.status());
  absl::StatusOr<wproj::BaseMeasureProblem> problem =
      wproj::BaseMeasureProblem::Create(*cost, f.eps);
  if (!problem.ok()) return Fail(problem.status());
  wproj::MirrorDescentOptions options;
  options.iterations = f.iters;
  if (cmd.count("--eta") > 0) options.eta = f.eta;
  options.decaying = f.decaying;
  absl::StatusOr<wproj::MirrorDescentResult> md =
      wproj::OptimizeBaseMeasure(*problem, options);
  if (!md.ok()) return Fail(md.status());
  ojson j;
  j["epsilon"] = f.eps;
  j["m"] = md->m_bar;
  j["f"] = md->f_bar;
  j["worst_case_cost"] = std::pow(md->f_bar, 1.0 / cost->p());
  j["eta"] = md->eta;
  j["regret_bound"] = md->regret_bound;
  if (f.history) j["history"] = md->history;
  // The optimizer is deterministic; the seed is recorded for provenance.
  if (f.seed.has_value()) j["seed"] = *f.seed;
  return Emit(j.dump(2) + "\n", f.out);
}

struct SphereFlags {
  int d = 2;
  double p = 2.0;
  double eps = 1.0;
  std::string out;
};

int RunSphere(const SphereFlags& f) {
  absl::StatusOr<wproj::SphereSolution> s =
      wproj::SphereBaseMeasure(f.d, f.p, f.eps);
  if (!s.ok()) return Fail(s.status());
  ojson j;
  j["d"] = s->d;
  j["p"] = s->p;
  j["epsilon"] = s->epsilon;
  j["t_star"] = s->t_star;
  j["alpha_star"] = s->alpha_star;
  j["cap_mass"] = s->cap_mass;
  j["worst_case_cost"] = s->worst_case_cost;
  j["residual"] = s->residual;
  return Emit(j.dump(2) + "\n", f.out);
}

struct AuditFlags {
  std::string mechanism = "wpm";
  int k = 30;
  double eps = 1.0;
  double p = 2.0;
  double lambda = 0.0;
  std::string cost;
  std::string m;
  std::vector<std::string> extra;
  std::string out;
};

int RunAudit(const AuditFlags& f) {
  absl::StatusOr<wproj::CostMatrix> cost =
      f.cost.empty() ? wproj::BuildCostMatrix(wproj::RingSpace{f.k}, f.p)
                     : wproj::LoadCostMatrix(f.cost);
  if (!cost.ok()) return Fail(cost.status());
  wproj::MechanismSpec spec{f.mechanism, f.eps, f.lambda, {}, {}};
  if (f.mechanism == "wpm" || f.mechanism == "wpm-exact") {
    if (f.m.empty()) {
      spec.m.assign(cost->output_size(), 1.0 / cost->output_size());
    } else {
      absl::StatusOr<wproj::VectorFile> m = wproj::LoadVector(f.m);
      if (!m.ok()) return Fail(m.status());
      spec.m = m->values;
    }
  }
  absl::StatusOr<wproj::Mechanism> mech = wproj::MakeMechanism(*cost, spec);
  if (!mech.ok()) return Fail(mech.status());
  std::vector<wproj::Distribution> extras;
  for (const std::string& path : f.extra) {
    absl::StatusOr<wproj::Distribution> d = wproj::LoadDistribution(path);
    if (!d.ok()) return Fail(d.status());
    extras.push_back(*std::move(d));
  }
  absl::StatusOr<wproj::AuditReport> report =
      wproj::AuditLdp(*mech, cost->input_size(), f.eps, extras);
  if (!report.ok()) return Fail(report.status());
  const int rc = Emit(wproj::AuditReportJson(*report) + "\n", f.out);
  return rc != 0 ? rc : (report->pass ? 0 : 1);
}

struct CostFlags {
  std::string space = "ring";
  int k = 30;
  int rows = 20;
  int cols = 20;
  double cell_size = 1.0;
  std::string points;
  double p = 2.0;
  std::string format = "csv";
  std::string out;
};

int RunCost(const CostFlags& f) {
  wproj::GroundSpace space = wproj::RingSpace{f.k};
  if (f.space == "grid") {
    space = wproj::GridSpace{f.rows, f.cols, f.cell_size};
  } else if (f.space == "points") {
    absl::StatusOr<wproj::PointCloud> cloud = wproj::LoadPointCloud(f.points);
    if (!cloud.ok()) return Fail(cloud.status());
    space = *std::move(cloud);
  } else if (f.space != "ring") {
    return Fail(absl::InvalidArgumentError(
        absl::StrCat("unknown space '", f.space, "'")));
  }
  absl::StatusOr<wproj::CostMatrix> cost = wproj::BuildCostMatrix(space, f.p);
  if (!cost.ok()) return Fail(cost.status());
  return Emit(f.format == "json" ? wproj::CostMatrixToJson(*cost)
                                 : wproj::CostMatrixToCsv(*cost),
              f.out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Wasserstein projection mechanisms under local differential "
      "privacy"};
  app.require_subcommand(1);
  app.fallthrough();
  app.config_formatter(std::make_shared<JsonConfig>(&app));
  app.set_config("--config", "", "JSON file of flag values for the subcommand");

  BenchFlags bench;
  CLI::App* bench_cmd = app.add_subcommand("bench", "Run an experiment");
  bench_cmd
      ->add_option("experiment", bench.experiment, "ring | grid | worst-case")
      ->check(CLI::IsMember({"ring", "grid", "worst-case"}));
  bench_cmd->add_option("--config", bench.config, "Experiment config JSON")
      ->check(CLI::ExistingFile);
  bench_cmd->add_option("--k", bench.k, "Ring size");
  bench_cmd->add_option("--ks", bench.ks, "Ring sizes for worst-case")
      ->delimiter(',');
  bench_cmd->add_option("--rows", bench.rows, "Grid rows");
  bench_cmd->add_option("--cols", bench.cols, "Grid columns");
  bench_cmd->add_option("--cell-size", bench.cell_size, "Grid cell size");
  bench_cmd->add_option("--p", bench.p, "Wasserstein order");
  bench_cmd->add_option("--eps", bench.eps, "Privacy levels")->delimiter(',');
  bench_cmd
      ->add_option("--lambda", bench.lambda,
                   "Entropic regularizations (0 = exact)")
      ->delimiter(',');
  bench_cmd->add_option("--mechanisms,--mechanism", bench.mechanisms)
      ->delimiter(',')
      ->check(CLI::IsMember({"wpm", "wpm-exact", "kpm", "expmech"}));
  bench_cmd->add_option("--base-measure", bench.base_measure)
      ->check(CLI::IsMember({"kpm", "uniform", "best-uniform", "optimized"}));
  bench_cmd->add_option("--seed", bench.seed);
  bench_cmd->add_option("--inputs", bench.inputs, "Number of input draws");
  bench_cmd->add_option("--md-iters", bench.md_iters, "Mirror-descent steps");
  bench_cmd->add_option("--tol", bench.tol,
                        "Hilbert-metric stopping tolerance");
  bench_cmd->add_option("--max-iters", bench.max_iters);
  bench_cmd->add_option("--trace-iters", bench.trace_iters,
                        "Iterations recorded in convergence.csv");
  bench_cmd->add_flag("--no-audit", bench.no_audit);
  bench_cmd->add_option("--threads", bench.threads, "0 = all cores");
  bench_cmd->add_option("--out", bench.out, "Output directory");

  ProjectFlags project;
  CLI::App* project_cmd =
      app.add_subcommand("project", "Project a distribution onto Q(m, eps)");
  project_cmd->add_option("--cost", project.cost, "Cost matrix (CSV or JSON)")
      ->required();
  project_cmd->add_option("--mu", project.mu, "Input distribution")->required();
  project_cmd->add_option("--m", project.m, "Base measure")->required();
  project_cmd->add_option("--eps", project.eps, "Privacy level");
  project_cmd->add_option("--lambda", project.lambda,
                          "Entropic regularization (0 = exact)");
  project_cmd->add_option("--tol", project.tol);
  project_cmd->add_option("--max-iters", project.max_iters);
  project_cmd->add_option("--out", project.out, "Output file (default stdout)");

  OptimizeFlags optimize;
  CLI::App* optimize_cmd = app.add_subcommand(
      "optimize-m", "Minimize the worst-case cost over base measures");
  optimize_cmd->add_option("--cost", optimize.cost)->required();
  optimize_cmd->add_option("--eps", optimize.eps)->required();
  optimize_cmd->add_option("--iters", optimize.iters, "Mirror-descent steps");
  optimize_cmd->add_option("--eta", optimize.eta, "Step size");
  optimize_cmd->add_flag("--decaying", optimize.decaying, "eta / sqrt(t)");
  optimize_cmd->add_flag("--history", optimize.history,
                         "Include f(m_t) per step");
  optimize_cmd->add_option("--seed", optimize.seed,
                           "Recorded in the output; the optimizer is "
                           "deterministic");
  optimize_cmd->add_option("--out", optimize.out);

  SphereFlags sphere;
  CLI::App* sphere_cmd =
      app.add_subcommand("sphere-m", "Optimal base measure on the sphere S^d");
  sphere_cmd->add_option("--d", sphere.d)->required();
  sphere_cmd->add_option("--p", sphere.p)->required();
  sphere_cmd->add_option("--eps", sphere.eps)->required();
  sphere_cmd->add_option("--out", sphere.out);

  AuditFlags audit;
  CLI::App* audit_cmd =
      app.add_subcommand("audit", "Check a mechanism's LDP ratio on Diracs");
  audit_cmd->add_option("--mechanism", audit.mechanism)
      ->check(CLI::IsMember({"wpm", "wpm-exact", "kpm", "expmech"}));
  audit_cmd->add_option("--k", audit.k, "Ring size when --cost is absent");
  audit_cmd->add_option("--eps", audit.eps)->required();
  audit_cmd->add_option("--p", audit.p);
  audit_cmd->add_option("--lambda", audit.lambda, "wpm only; 0 = exact");
  audit_cmd->add_option("--cost", audit.cost);
  audit_cmd->add_option("--m", audit.m, "Base measure (default uniform)");
  audit_cmd->add_option("--extra", audit.extra, "Extra input distributions");
  audit_cmd->add_option("--out", audit.out);

  CostFlags cost;
  CLI::App* cost_cmd = app.add_subcommand("cost", "Write a cost matrix");
  cost_cmd->add_option("--space", cost.space)
      ->check(CLI::IsMember({"ring", "grid", "points"}));
  cost_cmd->add_option("--k", cost.k);
  cost_cmd->add_option("--rows", cost.rows);
  cost_cmd->add_option("--cols", cost.cols);
  cost_cmd->add_option("--cell-size", cost.cell_size);
  cost_cmd->add_option("--points", cost.points, "Point cloud file");
  cost_cmd->add_option("--p", cost.p);
  cost_cmd->add_option("--format", cost.format)
      ->check(CLI::IsMember({"csv", "json"}));
  cost_cmd->add_option("--out", cost.out);

  CLI11_PARSE(app, argc, argv);

  if (*bench_cmd) return RunBench(*bench_cmd, bench);
  if (*project_cmd) return RunProject(*project_cmd, project);
  if (*optimize_cmd) return RunOptimize(*optimize_cmd, optimize);
  if (*sphere_cmd) return RunSphere(sphere);
  if (*audit_cmd) return RunAudit(audit);
  if (*cost_cmd) return RunCost(cost);
  return 0;
}
