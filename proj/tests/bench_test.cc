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

#include <cmath>
#include <map>
#include <string>

#include "gtest/gtest.h"
#include "json.hpp"

namespace wproj {
namespace {

ExperimentConfig SmallRing() {
  ExperimentConfig c = *DefaultConfig("ring");
  c.k = 10;
  c.epsilons = {1.0, 3.0};
  c.lambdas = {0.02, 0.0};
  c.num_inputs = 3;
  c.trace_iters = 10;
  return c;
}

TEST(ConfigTest, JsonRoundTrip) {
  ExperimentConfig c = SmallRing();
  c.seed = 99;
  c.mechanisms = {"wpm", "kpm"};
  absl::StatusOr<ExperimentConfig> back = ParseConfigJson(ConfigToJson(c));
  ASSERT_TRUE(back.ok()) << back.status();
  EXPECT_EQ(ConfigToJson(*back), ConfigToJson(c));
  EXPECT_EQ(back->seed, 99u);
  EXPECT_EQ(back->mechanisms, c.mechanisms);
}

TEST(ConfigTest, RejectsUnknownKeysAndBadValues) {
  EXPECT_FALSE(ParseConfigJson(R"({"kk": 3})").ok());
  EXPECT_FALSE(ParseConfigJson(R"({"k": "three"})").ok());
  EXPECT_FALSE(ParseConfigJson(R"({"mechanisms": ["laplace"]})").ok());
  EXPECT_FALSE(ParseConfigJson(R"({"epsilons": [-1]})").ok());
  EXPECT_FALSE(ParseConfigJson(R"({"experiment": "moon"})").ok());
  EXPECT_FALSE(ParseConfigJson("[1, 2]").ok());
  absl::StatusOr<ExperimentConfig> c =
      ParseConfigJson(R"({"epsilon": 2.5, "lambda": 0.1, "tol": 1e-8})");
  ASSERT_TRUE(c.ok());
  EXPECT_EQ(c->epsilons, std::vector<double>{2.5});
  EXPECT_EQ(c->lambdas, std::vector<double>{0.1});
  EXPECT_EQ(c->stop.tol, 1e-8);
}

TEST(MakeMechanismTest, RejectsUnknownOrInfeasible) {
  const CostMatrix c = *BuildCostMatrix(RingSpace{4}, 1.0);
  MechanismSpec spec;
  spec.name = "identity";
  spec.epsilon = 1.0;
  EXPECT_FALSE(MakeMechanism(c, spec).ok());
  spec.name = "wpm";
  spec.lambda = 0.1;
  spec.m = {0.01, 0.01, 0.01, 0.01};
  EXPECT_FALSE(MakeMechanism(c, spec).ok());
}

TEST(RingBenchTest, InvariantsHold) {
  const ExperimentConfig config = SmallRing();
  absl::StatusOr<BenchResult> r = RunSyntheticRing(config);
  ASSERT_TRUE(r.ok()) << r.status();
  // 4 mechanisms with wpm expanded over two lambdas: 5 cells per epsilon.
  EXPECT_EQ(r->rows.size(), 2u * 5u * 3u);
  for (const CellAudit& a : r->audits) {
    EXPECT_TRUE(a.pass) << a.mechanism << " eps=" << a.epsilon;
    EXPECT_TRUE(a.dirac_inputs);
  }
  // (epsilon, input) -> W_p of each mechanism.
  std::map<std::pair<double, int>, std::map<std::string, double>> w;
  for (const ResultRow& row : r->rows) {
    EXPECT_TRUE(row.audit_pass);
    std::string key = row.mechanism;
    if (row.mechanism == "wpm") key += "@" + std::to_string(*row.lambda);
    w[{row.epsilon, row.input}][key] = row.wasserstein_p;
    if (row.gap_vs_exact.has_value()) {
      EXPECT_GE(*row.gap_vs_exact, -1e-8);
      EXPECT_LE(*row.gap_vs_exact, *row.gap_bound);
    }
  }
  for (const auto& [cell, by_mech] : w) {
    // The wpm polytope uses the kpm base measure, so kpm's output is feasible.
    EXPECT_LE(by_mech.at("wpm-exact"), by_mech.at("kpm") + 1e-9);
  }
  EXPECT_FALSE(r->convergence.empty());
}

TEST(RingBenchTest, OutputIndependentOfThreadCount) {
  ExperimentConfig config = SmallRing();
  config.threads = 1;
  const std::string a = ResultsJson(*RunSyntheticRing(config));
  config.threads = 3;
  const std::string b = ResultsJson(*RunSyntheticRing(config));
  EXPECT_EQ(a, b);
  config.seed += 1;
  EXPECT_NE(a, ResultsJson(*RunSyntheticRing(config)));
}

TEST(RingBenchTest, ResultsJsonShape) {
  ExperimentConfig config = SmallRing();
  config.epsilons = {2.0};
  config.lambdas = {0.05};
  const nlohmann::json j =
      nlohmann::json::parse(ResultsJson(*RunSyntheticRing(config)));
  EXPECT_EQ(j["metadata"]["rng"], "splitmix64-counter");
  EXPECT_EQ(j["metadata"]["seed"], 7);
  EXPECT_FALSE(j["rows"].empty());
  EXPECT_FALSE(j["rows"][0].contains("runtime_ms"));
  EXPECT_EQ(j["base_measures"].size(), 1u);
}

TEST(GridBenchTest, SmallGridRuns) {
  ExperimentConfig config = *DefaultConfig("grid");
  config.grid_rows = 4;
  config.grid_cols = 4;
  config.epsilons = {2.0};
  config.num_inputs = 2;
  config.md_iters = 200;
  absl::StatusOr<BenchResult> r = RunSyntheticGrid(config);
  ASSERT_TRUE(r.ok()) << r.status();
  EXPECT_FALSE(r->rows.empty());
  for (const CellAudit& a : r->audits) EXPECT_TRUE(a.pass) << a.mechanism;
  ASSERT_EQ(r->base_measures.size(), 1u);
  EXPECT_EQ(r->base_measures[0].m.size(), 16u);
}

TEST(WorstCaseBenchTest, WpmBeatsBaselinesAndJensenHolds) {
  ExperimentConfig config = *DefaultConfig("worst-case");
  config.ks = {6, 10};
  config.md_iters = 2000;
  std::map<std::tuple<int, double, std::string>, double> u[2];
  for (int pi = 0; pi < 2; ++pi) {
    config.p = pi == 0 ? 1.0 : 2.0;
    absl::StatusOr<BenchResult> r = RunWorstCaseTable(config);
    ASSERT_TRUE(r.ok()) << r.status();
    for (const WorstCaseRow& row : r->worst_case) {
      u[pi][{row.k, row.epsilon, row.mechanism}] = row.utility;
    }
    for (const WorstCaseRow& row : r->worst_case) {
      if (row.mechanism != "wpm") continue;
      const double f = std::pow(row.utility, row.p);
      for (const char* other : {"kpm", "expmech"}) {
        const double base = u[pi][{row.k, row.epsilon, other}];
        EXPECT_LE(f, std::pow(base, row.p) + *row.regret_bound)
            << other << " k=" << row.k << " eps=" << row.epsilon;
      }
    }
  }
  for (const auto& [key, u1] : u[0]) {
    if (std::get<2>(key) == "kpm" || std::get<2>(key) == "expmech") {
      EXPECT_LE(u1, u[1].at(key) + 1e-12);
    }
  }
}

}  // namespace
}  // namespace wproj
