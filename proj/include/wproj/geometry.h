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

// Ground spaces and transport cost matrices.
//
// A cost matrix holds C(i, j) = d(x_i, v_j)^p between every input point x_i
// of a ground space and every point v_j of a chosen output subset.

#ifndef WPROJ_GEOMETRY_H_
#define WPROJ_GEOMETRY_H_

#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "wproj/matrix.h"

namespace wproj {

// k points on a cycle, d(i, j) = min(|i - j|, k - |i - j|).
struct RingSpace {
  int k = 0;
};

// rows x cols cells; distance is Euclidean between cell centers, scaled by
// cell_size. Cell (r, c) has index r * cols + c.
struct GridSpace {
  int rows = 0;
  int cols = 0;
  double cell_size = 1.0;
};

enum class Metric { kEuclidean, kCosine };

struct PointCloud {
  std::vector<std::vector<double>> points;
  Metric metric = Metric::kEuclidean;
};

using GroundSpace = std::variant<RingSpace, GridSpace, PointCloud>;

// Number of points in the space.
int SpaceSize(const GroundSpace& space);

absl::Status ValidateSpace(const GroundSpace& space);

// Metric distance between points i and j of the space (before raising to p).
// Cosine distance is 1 - <x, y> / (|x| |y|) clipped to [0, 2].
double PointDistance(const GroundSpace& space, int i, int j);

class CostMatrix {
 public:
  CostMatrix() = default;
  // Fails unless all entries are finite and nonnegative and p >= 1.
  static absl::StatusOr<CostMatrix> Create(Matrix costs, double p);

  const Matrix& costs() const { return costs_; }
  double operator()(int i, int j) const { return costs_(i, j); }
  std::span<const double> row(int i) const { return costs_.row(i); }
  double p() const { return p_; }
  int input_size() const { return costs_.rows(); }
  int output_size() const { return costs_.cols(); }
  double max_cost() const { return max_cost_; }

 private:
  CostMatrix(Matrix costs, double p, double max_cost)
      : costs_(std::move(costs)), p_(p), max_cost_(max_cost) {}

  Matrix costs_;
  double p_ = 1.0;
  double max_cost_ = 0.0;
};

// Costs from every point of `space` to the points listed in `output_subset`.
absl::StatusOr<CostMatrix> BuildCostMatrix(const GroundSpace& space,
                                           std::span<const int> output_subset,
                                           double p);

// Full output: the output set is the whole space.
absl::StatusOr<CostMatrix> BuildCostMatrix(const GroundSpace& space, double p);

}  // namespace wproj

#endif  // WPROJ_GEOMETRY_H_
