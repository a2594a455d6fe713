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

#include "wproj/geometry.h"

#include <cmath>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace wproj {
namespace {

using ::testing::ElementsAre;

std::vector<double> Row(const CostMatrix& c, int i) {
  const auto r = c.row(i);
  return {r.begin(), r.end()};
}

TEST(RingTest, FourPointRowMatchesRingDistance) {
  absl::StatusOr<CostMatrix> c = BuildCostMatrix(RingSpace{4}, 1.0);
  ASSERT_TRUE(c.ok()) << c.status();
  EXPECT_THAT(Row(*c, 0), ElementsAre(0, 1, 2, 1));
  EXPECT_EQ(c->input_size(), 4);
  EXPECT_EQ(c->output_size(), 4);
}

TEST(RingTest, ThirtyPointSquaredIsCirculantWithMax225) {
  absl::StatusOr<CostMatrix> c = BuildCostMatrix(RingSpace{30}, 2.0);
  ASSERT_TRUE(c.ok());
  EXPECT_DOUBLE_EQ(c->max_cost(), 225.0);
  for (int i = 0; i < 30; ++i) {
    for (int j = 0; j < 30; ++j) {
      EXPECT_EQ((*c)(i, j), (*c)(0, (j - i + 30) % 30));
    }
  }
}

TEST(RingTest, RejectsTinyRing) {
  EXPECT_FALSE(BuildCostMatrix(RingSpace{1}, 1.0).ok());
}

TEST(OutputSubsetTest, SingleOutputColumnIsDistanceToThatPoint) {
  const GroundSpace space = GridSpace{3, 4, 0.5};
  for (int target : {0, 5, 11}) {
    const std::vector<int> subset = {target};
    absl::StatusOr<CostMatrix> c = BuildCostMatrix(space, subset, 3.0);
    ASSERT_TRUE(c.ok());
    EXPECT_EQ(c->output_size(), 1);
    EXPECT_EQ((*c)(target, 0), 0.0);
    for (int i = 0; i < 12; ++i) {
      EXPECT_DOUBLE_EQ((*c)(i, 0),
                       std::pow(PointDistance(space, i, target), 3));
    }
  }
}

TEST(OutputSubsetTest, RejectsEmptyAndOutOfRange) {
  const std::vector<int> empty;
  const std::vector<int> bad = {0, 4};
  EXPECT_EQ(BuildCostMatrix(RingSpace{4}, empty, 1.0).status().code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_EQ(BuildCostMatrix(RingSpace{4}, bad, 1.0).status().code(),
            absl::StatusCode::kOutOfRange);
}

TEST(GridTest, EuclideanBetweenCellCentersTimesCellSize) {
  const GroundSpace space = GridSpace{2, 3, 2.0};
  // Cell 0 is (row 0, col 0); cell 5 is (row 1, col 2).
  EXPECT_DOUBLE_EQ(PointDistance(space, 0, 5), 2.0 * std::sqrt(5.0));
  EXPECT_DOUBLE_EQ(PointDistance(space, 1, 4), 2.0);
}

TEST(GridTest, RejectsNonPositiveCellSize) {
  EXPECT_FALSE(ValidateSpace(GridSpace{2, 2, 0.0}).ok());
  EXPECT_FALSE(ValidateSpace(GridSpace{0, 2, 1.0}).ok());
}

TEST(PointCloudTest, CosineDistance) {
  PointCloud cloud{{{1, 0}, {0, 2}, {-3, 0}, {1, 1}}, Metric::kCosine};
  ASSERT_TRUE(ValidateSpace(cloud).ok());
  EXPECT_DOUBLE_EQ(PointDistance(cloud, 0, 1), 1.0);
  EXPECT_DOUBLE_EQ(PointDistance(cloud, 0, 2), 2.0);
  EXPECT_NEAR(PointDistance(cloud, 0, 3), 1.0 - std::sqrt(0.5), 1e-15);
  EXPECT_EQ(PointDistance(cloud, 3, 3), 0.0);
}

TEST(PointCloudTest, RejectsZeroVectorUnderCosineAndRaggedPoints) {
  EXPECT_FALSE(
      ValidateSpace(PointCloud{{{1, 0}, {0, 0}}, Metric::kCosine}).ok());
  EXPECT_TRUE(
      ValidateSpace(PointCloud{{{1, 0}, {0, 0}}, Metric::kEuclidean}).ok());
  EXPECT_FALSE(
      ValidateSpace(PointCloud{{{1, 0}, {0}}, Metric::kEuclidean}).ok());
  EXPECT_FALSE(ValidateSpace(PointCloud{{}, Metric::kEuclidean}).ok());
}

TEST(CostMatrixTest, RejectsBadEntriesAndOrder) {
  Matrix m(1, 2);
  m(0, 1) = -1.0;
  EXPECT_FALSE(CostMatrix::Create(m, 1.0).ok());
  m(0, 1) = NAN;
  EXPECT_FALSE(CostMatrix::Create(m, 1.0).ok());
  m(0, 1) = 1.0;
  EXPECT_FALSE(CostMatrix::Create(m, 0.5).ok());
  EXPECT_TRUE(CostMatrix::Create(m, 1.0).ok());
}

// Metric properties on spaces whose distance is a true metric.
class MetricPropertyTest : public ::testing::TestWithParam<GroundSpace> {};

TEST_P(MetricPropertyTest, ZeroDiagonalSymmetryTriangle) {
  const GroundSpace& space = GetParam();
  const int n = SpaceSize(space);
  absl::StatusOr<CostMatrix> d = BuildCostMatrix(space, 1.0);
  ASSERT_TRUE(d.ok());
  for (int i = 0; i < n; ++i) {
    EXPECT_EQ((*d)(i, i), 0.0);
    for (int j = 0; j < n; ++j) {
      EXPECT_EQ((*d)(i, j), (*d)(j, i));
      for (int l = 0; l < n; ++l) {
        EXPECT_LE((*d)(i, l), (*d)(i, j) + (*d)(j, l) + 1e-12);
      }
    }
  }
}

TEST_P(MetricPropertyTest, PowerIsRecomputedFromDistance) {
  const GroundSpace& space = GetParam();
  const int n = SpaceSize(space);
  for (double p : {1.0, 1.5, 2.0, 4.0}) {
    absl::StatusOr<CostMatrix> c = BuildCostMatrix(space, p);
    ASSERT_TRUE(c.ok());
    EXPECT_EQ(c->p(), p);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        EXPECT_NEAR((*c)(i, j), std::pow(PointDistance(space, i, j), p),
                    1e-12 * (1 + (*c)(i, j)));
      }
    }
  }
}

INSTANTIATE_TEST_SUITE_P(
    Spaces, MetricPropertyTest,
    ::testing::Values(GroundSpace{RingSpace{7}}, GroundSpace{RingSpace{12}},
                      GroundSpace{GridSpace{3, 4, 1.5}},
                      GroundSpace{PointCloud{
                          {{0, 0, 1}, {2, -1, 0}, {0.5, 0.5, 0.5}, {-1, 3, 2}},
                          Metric::kEuclidean}}));

}  // namespace
}  // namespace wproj
