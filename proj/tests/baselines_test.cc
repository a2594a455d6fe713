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

#include "wproj/baselines.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "generators.h"
#include "gtest/gtest.h"

namespace wproj {
namespace {

TEST(KpmTest, FloorAndBaseMeasure) {
  const KpmParams params{3, std::numbers::ln2};
  EXPECT_NEAR(params.floor(), 0.25, 1e-15);
  for (double mj : KpmBaseMeasure(params)) {
    EXPECT_NEAR(mj, std::sqrt(2.0) * 0.25, 1e-15);
  }
}

TEST(KpmTest, DiracExample) {
  absl::StatusOr<Distribution> r =
      KpmTransform(KpmParams{3, std::numbers::ln2}, Distribution::Dirac(3, 0));
  ASSERT_TRUE(r.ok()) << r.status();
  EXPECT_NEAR((*r)[0], 0.5, 1e-12);
  EXPECT_NEAR((*r)[1], 0.25, 1e-12);
  EXPECT_NEAR((*r)[2], 0.25, 1e-12);
}

TEST(KpmTest, UniformIsFixed) {
  absl::StatusOr<Distribution> r =
      KpmTransform(KpmParams{7, 1.0}, Distribution::Uniform(7));
  ASSERT_TRUE(r.ok());
  for (int j = 0; j < 7; ++j) EXPECT_NEAR((*r)[j], 1.0 / 7, 1e-12);
}

TEST(KpmTest, LargeEpsilonReturnsInput) {
  const Distribution mu = *Distribution::Create({0.6, 0.3, 0.1, 0.0});
  absl::StatusOr<Distribution> r = KpmTransform(KpmParams{4, 60.0}, mu);
  ASSERT_TRUE(r.ok());
  for (int j = 0; j < 4; ++j) EXPECT_NEAR((*r)[j], mu[j], 1e-12);
}

TEST(KpmTest, RejectsMismatch) {
  EXPECT_FALSE(KpmTransform(KpmParams{4, 1.0}, Distribution::Uniform(3)).ok());
}

TEST(KpmPropertyTest, FloorAndPolytopeContainment) {
  testing::Gen gen(40);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = gen.Int(2, 30);
    const KpmParams params{k, gen.Uniform(0.05, 8.0)};
    const Distribution mu = gen.Dist(k, 0.4);
    absl::StatusOr<Distribution> r = KpmTransform(params, mu);
    ASSERT_TRUE(r.ok());
    for (double x : r->probs()) EXPECT_GE(x, params.floor() - 1e-12);
    const LdpPolytope q =
        *LdpPolytope::Create(KpmBaseMeasure(params), params.epsilon);
    EXPECT_TRUE(*Contains(q, r->probs(), 1e-12));
  }
}

TEST(ExpMechTest, ConstantDistanceGivesUniform) {
  ExpMechParams params{*CostMatrix::Create(Matrix(3, 5, 2.0), 1.0), 3.0, 1.0};
  absl::StatusOr<Distribution> r =
      ExpMechanism(params, *Distribution::Create({0.2, 0.5, 0.3}));
  ASSERT_TRUE(r.ok());
  for (int j = 0; j < 5; ++j) EXPECT_NEAR((*r)[j], 0.2, 1e-15);
}

TEST(ExpMechTest, RingRankingFollowsDistance) {
  const CostMatrix c = *BuildCostMatrix(RingSpace{4}, 1.0);
  ExpMechParams params{c, 2.0, c.max_cost()};
  absl::StatusOr<Distribution> r =
      ExpMechanism(params, Distribution::Dirac(4, 0));
  ASSERT_TRUE(r.ok());
  EXPECT_GT((*r)[0], (*r)[1]);
  EXPECT_NEAR((*r)[1], (*r)[3], 1e-15);
  EXPECT_GT((*r)[1], (*r)[2]);
  EXPECT_NEAR((*r)[0] / (*r)[2], std::exp(2.0 * 2 / (2 * 2.0)), 1e-12);
}

TEST(ExpMechTest, SmallEpsilonApproachesUniform) {
  const CostMatrix c = *BuildCostMatrix(RingSpace{6}, 2.0);
  ExpMechParams params{c, 1e-9, DefaultSensitivity(c)};
  absl::StatusOr<Distribution> r =
      ExpMechanism(params, Distribution::Dirac(6, 0));
  ASSERT_TRUE(r.ok());
  for (int j = 0; j < 6; ++j) EXPECT_NEAR((*r)[j], 1.0 / 6, 1e-9);
}

TEST(ExpMechTest, SensitivityUsesUnpoweredDistance) {
  const CostMatrix c = *BuildCostMatrix(RingSpace{6}, 2.0);
  EXPECT_NEAR(DefaultSensitivity(c), 3.0, 1e-12);
  ExpMechParams params{c, 1.0, 0.0};
  EXPECT_FALSE(ExpMechanism(params, Distribution::Dirac(6, 0)).ok());
}

TEST(ExpMechPropertyTest, DiracPairRatiosWithinEpsilon) {
  testing::Gen gen(41);
  for (int trial = 0; trial < 50; ++trial) {
    const int k = gen.Int(2, 10);
    const int kv = gen.Int(1, 10);
    const CostMatrix c = gen.Costs(k, kv, false, 3.0, gen.Coin(0.5) ? 1 : 2);
    const double eps = gen.Uniform(0.1, 6.0);
    ExpMechParams params{c, eps, DefaultSensitivity(c)};
    std::vector<Distribution> outs;
    for (int i = 0; i < k; ++i) {
      outs.push_back(*ExpMechanism(params, Distribution::Dirac(k, i)));
    }
    for (int j = 0; j < kv; ++j) {
      double hi = 0.0, lo = 1.0;
      for (const Distribution& o : outs) {
        hi = std::max(hi, o[j]);
        lo = std::min(lo, o[j]);
      }
      EXPECT_LE(std::log(hi / lo), eps + 1e-9);
    }
  }
}

}  // namespace
}  // namespace wproj
