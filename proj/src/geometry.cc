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

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

#include "absl/strings/str_cat.h"

namespace wproj {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

double Norm(const std::vector<double>& x) {
  return std::sqrt(std::inner_product(x.begin(), x.end(), x.begin(), 0.0));
}

}  // namespace

int SpaceSize(const GroundSpace& space) {
  return std::visit(
      Overloaded{
          [](const RingSpace& s) { return s.k; },
          [](const GridSpace& s) { return s.rows * s.cols; },
          [](const PointCloud& s) { return static_cast<int>(s.points.size()); },
      },
      space);
}

absl::Status ValidateSpace(const GroundSpace& space) {
  return std::visit(
      Overloaded{
          [](const RingSpace& s) -> absl::Status {
            if (s.k < 2) {
              return absl::InvalidArgumentError(
                  absl::StrCat("ring needs k >= 2, got ", s.k));
            }
            return absl::OkStatus();
          },
          [](const GridSpace& s) -> absl::Status {
            if (s.rows < 1 || s.cols < 1) {
              return absl::InvalidArgumentError("grid needs rows, cols >= 1");
            }
            if (!(s.cell_size > 0) || !std::isfinite(s.cell_size)) {
              return absl::InvalidArgumentError("grid cell_size must be > 0");
            }
            return absl::OkStatus();
          },
          [](const PointCloud& s) -> absl::Status {
            if (s.points.empty()) {
              return absl::InvalidArgumentError("point cloud is empty");
            }
            const std::size_t dim = s.points.front().size();
            if (dim == 0) {
              return absl::InvalidArgumentError("points must have dim >= 1");
            }
            for (std::size_t i = 0; i < s.points.size(); ++i) {
              if (s.points[i].size() != dim) {
                return absl::InvalidArgumentError(
                    absl::StrCat("point ", i, " has dimension ",
                                 s.points[i].size(), ", expected ", dim));
              }
              for (double x : s.points[i]) {
                if (!std::isfinite(x)) {
                  return absl::InvalidArgumentError(absl::StrCat(
                      "point ", i, " has a non-finite coordinate"));
                }
              }
              if (s.metric == Metric::kCosine && Norm(s.points[i]) == 0.0) {
                return absl::InvalidArgumentError(
                    absl::StrCat("cosine metric needs nonzero vectors; point ",
                                 i, " is zero"));
              }
            }
            return absl::OkStatus();
          },
      },
      space);
}

double PointDistance(const GroundSpace& space, int i, int j) {
  return std::visit(
      Overloaded{
          [&](const RingSpace& s) -> double {
            const int diff = std::abs(i - j);
            return std::min(diff, s.k - diff);
          },
          [&](const GridSpace& s) -> double {
            const double dr = (i / s.cols) - (j / s.cols);
            const double dc = (i % s.cols) - (j % s.cols);
            return s.cell_size * std::sqrt(dr * dr + dc * dc);
          },
          [&](const PointCloud& s) -> double {
            const auto& x = s.points[i];
            const auto& y = s.points[j];
            if (s.metric == Metric::kEuclidean) {
              double acc = 0.0;
              for (std::size_t t = 0; t < x.size(); ++t) {
                acc += (x[t] - y[t]) * (x[t] - y[t]);
              }
              return std::sqrt(acc);
            }
            if (i == j) return 0.0;
            const double dot =
                std::inner_product(x.begin(), x.end(), y.begin(), 0.0);
            return std::clamp(1.0 - dot / (Norm(x) * Norm(y)), 0.0, 2.0);
          },
      },
      space);
}

absl::StatusOr<CostMatrix> CostMatrix::Create(Matrix costs, double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) {
    return absl::InvalidArgumentError(absl::StrCat("p must be >= 1, got ", p));
  }
  if (costs.rows() < 1 || costs.cols() < 1) {
    return absl::InvalidArgumentError("cost matrix must be nonempty");
  }
  double max_cost = 0.0;
  for (double c : costs.data()) {
    if (!std::isfinite(c) || c < 0.0) {
      return absl::InvalidArgumentError(
          absl::StrCat("cost entries must be finite and >= 0, got ", c));
    }
    max_cost = std::max(max_cost, c);
  }
  return CostMatrix(std::move(costs), p, max_cost);
}

absl::StatusOr<CostMatrix> BuildCostMatrix(const GroundSpace& space,
                                           std::span<const int> output_subset,
                                           double p) {
  if (absl::Status s = ValidateSpace(space); !s.ok()) return s;
  if (output_subset.empty()) {
    return absl::InvalidArgumentError("output subset is empty");
  }
  if (!(p >= 1.0) || !std::isfinite(p)) {
    return absl::InvalidArgumentError(absl::StrCat("p must be >= 1, got ", p));
  }
  const int n = SpaceSize(space);
  for (int idx : output_subset) {
    if (idx < 0 || idx >= n) {
      return absl::OutOfRangeError(
          absl::StrCat("output index ", idx, " outside space of size ", n));
    }
  }
  const int kv = static_cast<int>(output_subset.size());
  Matrix costs(n, kv);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < kv; ++j) {
      const double d = PointDistance(space, i, output_subset[j]);
      costs(i, j) = p == 1.0 ? d : std::pow(d, p);
    }
  }
  return CostMatrix::Create(std::move(costs), p);
}

absl::StatusOr<CostMatrix> BuildCostMatrix(const GroundSpace& space, double p) {
  if (absl::Status s = ValidateSpace(space); !s.ok()) return s;
  std::vector<int> all(SpaceSize(space));
  std::iota(all.begin(), all.end(), 0);
  return BuildCostMatrix(space, all, p);
}

}  // namespace wproj
