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

// Experiment harness: the synthetic ring comparison with convergence traces,
// a synthetic check-in grid, and worst-case (Dirac-max) utility tables.

#ifndef WPROJ_BENCH_H_
#define WPROJ_BENCH_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "wproj/entropic_solver.h"
#include "wproj/geometry.h"
#include "wproj/privacy_audit.h"

namespace wproj {

struct ExperimentConfig {
  std::string experiment = "ring";    // ring | grid | worst-case
  int k = 30;                         // ring size
  std::vector<int> ks = {8, 16, 30};  // ring sizes for worst-case
  int grid_rows = 20;
  int grid_cols = 20;
  double cell_size = 1.0;
  double p = 2.0;
  std::vector<double> epsilons = {5.0};
  std::vector<double> lambdas = {0.01};  // 0 selects the exact solver
  std::vector<std::string> mechanisms = {"wpm", "wpm-exact", "kpm", "expmech"};
  // kpm | uniform | best-uniform | optimized
  std::string base_measure = "kpm";
  std::uint64_t seed = 7;
  int num_inputs = 1;
  double concentration = 0.1;  // Dirichlet parameter for ring inputs
  int checkins = 500;          // samples per synthetic grid distribution
  int md_iters = 1000;
  StoppingRule stop;
  int trace_iters = 200;
  bool audit = true;
  int audit_dirac_max = 50;  // Dirac inputs are audited when k <= this
  int threads = 0;
  std::string out_dir;
};

// Defaults for an experiment name: grid uses p = 1 and the best uniform base
// measure, worst-case uses eps in {1, 2, 5} and optimized m.
absl::StatusOr<ExperimentConfig> DefaultConfig(const std::string& experiment);

// Keys missing from the JSON keep the defaults of its "experiment".
absl::StatusOr<ExperimentConfig> ParseConfigJson(const std::string& text);
std::string ConfigToJson(const ExperimentConfig& config);
absl::Status ValidateConfig(const ExperimentConfig& config);

struct MechanismSpec {
  std::string name;  // wpm | wpm-exact | kpm | expmech
  double epsilon = 0.0;
  double lambda = 0.0;    // wpm only; 0 means exact
  std::vector<double> m;  // wpm only
  StoppingRule stop;
};

absl::StatusOr<Mechanism> MakeMechanism(const CostMatrix& cost,
                                        const MechanismSpec& spec);

struct ResultRow {
  std::string mechanism;
  double epsilon = 0.0;
  std::optional<double> lambda;  // wpm rows
  int input = 0;
  double wasserstein_p = 0.0;
  int iterations = 0;
  std::optional<double> gap_vs_exact;  // entropic minus exact, wpm rows
  std::optional<double> gap_bound;
  bool audit_pass = false;
  double runtime_ms = 0.0;
};

struct CellAudit {
  std::string mechanism;
  double epsilon = 0.0;
  std::optional<double> lambda;
  AuditReport report;
  bool dirac_inputs = false;
  std::optional<bool> in_polytope;  // outputs in Q(m, eps), polytope mechanisms
  bool pass = false;
};

struct ConvergencePoint {
  double epsilon = 0.0;
  double lambda = 0.0;
  int iteration = 0;
  double hilbert_residual = 0.0;
  double wasserstein_to_input = 0.0;
};

struct WorstCaseRow {
  int k = 0;
  double epsilon = 0.0;
  double p = 0.0;
  std::string mechanism;
  double utility = 0.0;  // max over Dirac inputs of W_p(output, input)
  std::optional<double> regret_bound;  // on f = utility^p, optimized wpm
  double runtime_ms = 0.0;
};

struct BaseMeasureRecord {
  double epsilon = 0.0;
  std::vector<double> m;
};

struct BenchResult {
  ExperimentConfig config;
  std::vector<BaseMeasureRecord> base_measures;
  std::vector<ResultRow> rows;
  std::vector<CellAudit> audits;
  std::vector<ConvergencePoint> convergence;
  std::vector<WorstCaseRow> worst_case;
};

absl::StatusOr<BenchResult> RunSyntheticRing(const ExperimentConfig& config);
absl::StatusOr<BenchResult> RunSyntheticGrid(const ExperimentConfig& config);
absl::StatusOr<BenchResult> RunWorstCaseTable(const ExperimentConfig& config);
// Dispatches on config.experiment.
absl::StatusOr<BenchResult> RunExperiment(const ExperimentConfig& config);

// results.json has no runtimes, so equal configs give identical bytes.
std::string ResultsJson(const BenchResult& result);
std::string ConvergenceCsv(const BenchResult& result);
std::string TimingsCsv(const BenchResult& result);
// Writes results.json, convergence.csv and timings.csv into dir.
absl::Status WriteBenchOutputs(const BenchResult& result,
                               const std::string& dir);

}  // namespace wproj

#endif  // WPROJ_BENCH_H_
