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

#include <cmath>
#include <numbers>
#include <vector>

#include "generators.h"
#include "gtest/gtest.h"
#include "wproj/exact_solver.h"

namespace wproj {
namespace {

TEST(HilbertDistanceTest, Examples) {
  const std::vector<double> x = {1.0, 2.0};
  const std::vector<double> y = {2.0, 1.0};
  EXPECT_NEAR(*HilbertDistance(x, y), std::log(4.0), 1e-15);
  EXPECT_EQ(*HilbertDistance(x, x), 0.0);
  EXPECT_NEAR(*HilbertDistance(x, std::vector<double>{3.0, 6.0}), 0.0, 1e-15);
  EXPECT_FALSE(HilbertDistance(x, std::vector<double>{0.0, 1.0}).ok());
  EXPECT_FALSE(HilbertDistance(x, std::vector<double>{1.0}).ok());
}

TEST(BirkhoffTest, Examples) {
  Matrix a(2, 2, 1.0);
  a(0, 1) = a(1, 0) = 2.0;
  EXPECT_NEAR(*BirkhoffCoefficient(a), std::tanh(std::log(4.0) / 4), 1e-15);
  EXPECT_EQ(*BirkhoffCoefficient(Matrix(3, 4, 0.7)), 0.0);
  Matrix rank_one(3, 2);
  const double u[] = {1.0, 2.0, 5.0};
  const double v[] = {0.3, 4.0};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 2; ++j) rank_one(i, j) = u[i] * v[j];
  }
  EXPECT_NEAR(*BirkhoffCoefficient(rank_one), 0.0, 1e-14);
  a(0, 0) = 0.0;
  EXPECT_FALSE(BirkhoffCoefficient(a).ok());
}

TEST(BirkhoffTest, GibbsFormMatchesKernel) {
  const CostMatrix c = *BuildCostMatrix(RingSpace{6}, 2.0);
  const GibbsKernel k = *GibbsKernel::Create(c, 3.0);
  EXPECT_NEAR(GibbsBirkhoffCoefficient(c.costs(), 3.0),
              *BirkhoffCoefficient(k.k), 1e-12);
}

TEST(GapBoundTest, Values) {
  EXPECT_EQ(EntropicGapBound(0.0, 30, 30, 2.0), 0.0);
  EXPECT_NEAR(EntropicGapBound(0.01, 30, 30, 2.0), 0.2608140097, 1e-9);
  EXPECT_NEAR(EntropicGapBound(0.001, 30, 30, 2.0), 0.0824766316, 1e-9);
  EXPECT_NEAR(EntropicGapBound(0.1, 30, 30, 2.0), 0.8247663162, 1e-9);
  const double lambda = 0.1 / std::log(12.0);
  EXPECT_NEAR(EntropicGapBound(lambda, 3, 4, 1.0), 0.1, 1e-15);
}

TEST(GibbsKernelTest, NormalizedAndUnderflowReported) {
  const CostMatrix c = *BuildCostMatrix(RingSpace{5}, 1.0);
  const GibbsKernel k = *GibbsKernel::Create(c, 0.5);
  double total = 0.0;
  for (double x : k.k.data()) total += x;
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_FALSE(GibbsKernel::Create(c, 0.0).ok());

  Matrix far(2, 2);
  far(1, 0) = far(1, 1) = 1000.0;
  const CostMatrix cf = *CostMatrix::Create(std::move(far), 1.0);
  EXPECT_EQ(GibbsKernel::Create(cf, 1e-3).status().code(),
            absl::StatusCode::kResourceExhausted);
}

TEST(ProjectEntropicTest, ConstantKernelConvergesAfterOneUpdate) {
  const CostMatrix c = *CostMatrix::Create(Matrix(4, 4, 1.0), 1.0);
  const Distribution mu = *Distribution::Create({0.7, 0.1, 0.1, 0.1});
  const LdpPolytope q = *LdpPolytope::Create({0.1, 0.2, 0.3, 0.4}, 1.0);
  EntropicOptions options;
  options.lambda = 0.5;
  absl::StatusOr<EntropicProjection> r = ProjectEntropic(c, mu, q, options);
  ASSERT_TRUE(r.ok()) << r.status();
  EXPECT_EQ(r->report.birkhoff_c, 0.0);
  EXPECT_LE(r->report.iterations, 2);
  EXPECT_EQ(r->report.hilbert_residuals.back(), 0.0);
  EXPECT_TRUE(r->report.converged);
}

TEST(ProjectEntropicTest, SymmetricInputGivesUniform) {
  const CostMatrix c = *BuildCostMatrix(RingSpace{8}, 2.0);
  const LdpPolytope q =
      *LdpPolytope::Create(std::vector<double>(8, 0.125), 20.0);
  EntropicOptions options;
  options.lambda = 0.5;
  absl::StatusOr<EntropicProjection> r =
      ProjectEntropic(c, Distribution::Uniform(8), q, options);
  ASSERT_TRUE(r.ok());
  for (int j = 0; j < 8; ++j) EXPECT_NEAR(r->nu[j], 0.125, 1e-12);
}

TEST(ProjectEntropicTest, TwoPointNearDiracWithinGapBound) {
  Matrix m(2, 2);
  m(0, 1) = m(1, 0) = 1.0;
  const CostMatrix c = *CostMatrix::Create(std::move(m), 1.0);
  const double delta = 1e-6;
  const Distribution mu = *Distribution::Create({1 - delta, delta});
  const LdpPolytope q =
      *LdpPolytope::Create({0.5, 0.5}, 2.0 * std::numbers::ln2);
  EntropicOptions options;
  options.lambda = 0.01;
  absl::StatusOr<EntropicProjection> r = ProjectEntropic(c, mu, q, options);
  ASSERT_TRUE(r.ok());
  EXPECT_NEAR(r->nu[0], 0.75, 1e-6);
  const double w_entropic = *WassersteinDistance(c, mu.probs(), r->nu.probs());
  const ExactProjection exact = *ProjectExact(c, mu, q);
  const double w_exact = std::pow(exact.plan.objective, 1.0);
  EXPECT_GE(w_entropic - w_exact, -1e-9);
  EXPECT_LE(w_entropic - w_exact, EntropicGapBound(0.01, 2, 2, 1.0));
}

TEST(ProjectEntropicTest, RejectsBadArguments) {
  const CostMatrix c = *BuildCostMatrix(RingSpace{3}, 1.0);
  const LdpPolytope q =
      *LdpPolytope::Create(std::vector<double>(3, 1.0 / 3), 1.0);
  EntropicOptions options;
  options.lambda = 0.0;
  EXPECT_FALSE(ProjectEntropic(c, Distribution::Uniform(3), q, options).ok());
  options.lambda = 0.1;
  EXPECT_FALSE(ProjectEntropic(c, Distribution::Uniform(2), q, options).ok());
  options.initial_v = {1.0, 1.0};
  EXPECT_FALSE(ProjectEntropic(c, Distribution::Uniform(3), q, options).ok());
  options.initial_v.clear();
  options.stop.max_iters = 0;
  EXPECT_FALSE(ProjectEntropic(c, Distribution::Uniform(3), q, options).ok());
}

TEST(ProjectEntropicTest, ObserverSeesEveryIteration) {
  const CostMatrix c = *BuildCostMatrix(RingSpace{6}, 1.0);
  const LdpPolytope q =
      *LdpPolytope::Create(std::vector<double>(6, 1.0 / 6), 1.0);
  EntropicOptions options;
  options.lambda = 0.2;
  std::vector<int> seen;
  options.observer = [&](const IterationState& s) {
    seen.push_back(s.t);
    EXPECT_EQ(s.v.size(), 6u);
    EXPECT_EQ(s.q.size(), 6u);
  };
  absl::StatusOr<EntropicProjection> r =
      ProjectEntropic(c, Distribution::Dirac(6, 2), q, options);
  ASSERT_TRUE(r.ok());
  ASSERT_EQ(static_cast<int>(seen.size()), r->report.iterations);
  for (int t = 0; t < r->report.iterations; ++t) EXPECT_EQ(seen[t], t);
  EXPECT_EQ(r->report.hilbert_residuals.size(), seen.size());
  EXPECT_EQ(r->report.kl_residuals.size() + 1, seen.size());
}

// Random instances with zeros in mu and m: the output is in Q, direct and
// log-domain kernels agree, and W_p sits between the exact value and the
// certified bound.
TEST(ProjectEntropicPropertyTest, ContainedModesAgreeWithinGap) {
  testing::Gen gen(31);
  for (int trial = 0; trial < 40; ++trial) {
    const int k = gen.Int(2, 12);
    const int kv = gen.Int(2, 12);
    const double eps = gen.Uniform(0.5, 5.0);
    const double p = gen.Coin(0.5) ? 1.0 : 2.0;
    const CostMatrix c = gen.Costs(k, kv, false, 1.0, p);
    const Distribution mu = gen.Dist(k, 0.25);
    std::vector<double> m = gen.FeasibleM(kv, eps);
    const LdpPolytope q = *LdpPolytope::Create(m, eps);
    const double lambda = gen.Uniform(0.05, 0.5);

    EntropicOptions options;
    options.lambda = lambda;
    options.stop.tol = 1e-13;
    options.stop.max_iters = 20000;
    options.mode = KernelMode::kDirect;
    absl::StatusOr<EntropicProjection> direct =
        ProjectEntropic(c, mu, q, options);
    options.mode = KernelMode::kLog;
    absl::StatusOr<EntropicProjection> logd =
        ProjectEntropic(c, mu, q, options);
    ASSERT_TRUE(direct.ok()) << direct.status();
    ASSERT_TRUE(logd.ok()) << logd.status();
    EXPECT_FALSE(direct->report.log_domain);
    EXPECT_TRUE(logd->report.log_domain);
    EXPECT_TRUE(*Contains(q, direct->nu.probs(), 1e-12));
    EXPECT_TRUE(*Contains(q, logd->nu.probs(), 1e-12));
    for (int j = 0; j < kv; ++j) {
      EXPECT_NEAR(direct->nu[j], logd->nu[j], 1e-8) << "trial " << trial;
    }
    const double w = *WassersteinDistance(c, mu.probs(), logd->nu.probs());
    const double w_star =
        std::pow(ProjectExact(c, mu, q)->plan.objective, 1.0 / p);
    EXPECT_GE(w - w_star, -1e-8);
    EXPECT_LE(w - w_star, EntropicGapBound(lambda, k, kv, p));
  }
}

// Warm-starting through coarser lambdas changes the path, not the answer.
TEST(ProjectEntropicPropertyTest, LambdaScalingKeepsFixedPoint) {
  testing::Gen gen(9);
  const CostMatrix c = *BuildCostMatrix(RingSpace{12}, 2.0);
  for (int trial = 0; trial < 5; ++trial) {
    const Distribution mu = gen.Dirichlet(12, 0.3);
    const LdpPolytope q =
        *LdpPolytope::Create(std::vector<double>(12, 1.0 / 12), 2.0);
    EntropicOptions options;
    options.lambda = 0.5;  // below 5% of max C = 36, so continuation runs
    options.stop.tol = 1e-13;
    options.stop.max_iters = 100000;
    const EntropicProjection warm = *ProjectEntropic(c, mu, q, options);
    options.lambda_scaling = false;
    const EntropicProjection cold = *ProjectEntropic(c, mu, q, options);
    EXPECT_TRUE(warm.report.converged);
    EXPECT_TRUE(cold.report.converged);
    EXPECT_GT(warm.report.warmup_iterations, 0);
    EXPECT_EQ(cold.report.warmup_iterations, 0);
    for (int j = 0; j < 12; ++j) EXPECT_NEAR(warm.nu[j], cold.nu[j], 1e-9);
  }
}

// Scaling costs and lambda together leaves the kernel, hence nu, unchanged.
TEST(ProjectEntropicPropertyTest, JointScaleInvariance) {
  testing::Gen gen(8);
  for (int trial = 0; trial < 10; ++trial) {
    const int k = gen.Int(2, 8);
    const double eps = gen.Uniform(0.5, 3.0);
    const CostMatrix c = gen.Costs(k, k);
    Matrix scaled = c.costs();
    for (double& x : scaled.data()) x *= 7.0;
    const CostMatrix c7 = *CostMatrix::Create(std::move(scaled), 1.0);
    const Distribution mu = gen.Dist(k);
    const LdpPolytope q = *LdpPolytope::Create(gen.FeasibleM(k, eps), eps);
    EntropicOptions options;
    options.lambda = 0.1;
    options.stop.tol = 1e-13;
    const Distribution a = ProjectEntropic(c, mu, q, options)->nu;
    options.lambda = 0.7;
    const Distribution b = ProjectEntropic(c7, mu, q, options)->nu;
    for (int j = 0; j < k; ++j) EXPECT_NEAR(a[j], b[j], 1e-10);
  }
}

}  // namespace
}  // namespace wproj
