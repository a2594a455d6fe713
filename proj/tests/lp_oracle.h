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

// Test-only oracle: dense two-phase simplex with Bland's rule, and the
// projection LP written out explicitly. Slow and simple on purpose.

#ifndef WPROJ_TESTS_LP_ORACLE_H_
#define WPROJ_TESTS_LP_ORACLE_H_

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "wproj/geometry.h"
#include "wproj/polytope.h"

namespace wproj::testing {

// min c^T x  s.t.  A x = b, x >= 0, with b >= 0. Returns the optimal value,
// or nullopt if infeasible or unbounded.
inline std::optional<double> SolveStandardLp(
    const std::vector<std::vector<double>>& a, const std::vector<double>& b,
    const std::vector<double>& c) {
  constexpr double kEps = 1e-11;
  const int rows = static_cast<int>(a.size());
  const int n = static_cast<int>(c.size());
  const int width = n + rows;  // original + artificial columns
  // Tableau rows 0..rows-1, rhs in the last column.
  std::vector<std::vector<double>> t(rows, std::vector<double>(width + 1, 0.0));
  std::vector<int> basis(rows);
  for (int r = 0; r < rows; ++r) {
    for (int j = 0; j < n; ++j) t[r][j] = a[r][j];
    t[r][n + r] = 1.0;
    t[r][width] = b[r];
    basis[r] = n + r;
  }

  auto run = [&](const std::vector<double>& cost, int allowed) -> bool {
    for (int guard = 0; guard < 100000; ++guard) {
      // Reduced costs.
      int enter = -1;
      for (int j = 0; j < allowed; ++j) {
        double rc = cost[j];
        for (int r = 0; r < rows; ++r) rc -= cost[basis[r]] * t[r][j];
        if (rc < -kEps) {
          enter = j;  // Bland: smallest index
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int r = 0; r < rows; ++r) {
        if (t[r][enter] > kEps) {
          const double ratio = t[r][width] / t[r][enter];
          if (leave < 0 || ratio < best - kEps ||
              (std::abs(ratio - best) <= kEps && basis[r] < basis[leave])) {
            best = ratio;
            leave = r;
          }
        }
      }
      if (leave < 0) return false;  // unbounded
      const double pivot = t[leave][enter];
      for (double& x : t[leave]) x /= pivot;
      for (int r = 0; r < rows; ++r) {
        if (r == leave || t[r][enter] == 0.0) continue;
        const double f = t[r][enter];
        for (int j = 0; j <= width; ++j) t[r][j] -= f * t[leave][j];
      }
      basis[leave] = enter;
    }
    return false;
  };

  std::vector<double> phase1(width, 0.0);
  for (int j = n; j < width; ++j) phase1[j] = 1.0;
  if (!run(phase1, width)) return std::nullopt;
  double infeasibility = 0.0;
  for (int r = 0; r < rows; ++r) {
    if (basis[r] >= n) infeasibility += t[r][width];
  }
  if (infeasibility > 1e-9) return std::nullopt;
  // Drive remaining zero-level artificials out of the basis where possible.
  for (int r = 0; r < rows; ++r) {
    if (basis[r] < n) continue;
    for (int j = 0; j < n; ++j) {
      if (std::abs(t[r][j]) > kEps) {
        const double pivot = t[r][j];
        for (double& x : t[r]) x /= pivot;
        for (int s = 0; s < rows; ++s) {
          if (s == r || t[s][j] == 0.0) continue;
          const double f = t[s][j];
          for (int col = 0; col <= width; ++col) t[s][col] -= f * t[r][col];
        }
        basis[r] = j;
        break;
      }
    }
  }
  std::vector<double> phase2(width, 0.0);
  for (int j = 0; j < n; ++j) phase2[j] = c[j];
  // Artificials stay at zero: forbid them from entering.
  if (!run(phase2, n)) return std::nullopt;
  double value = 0.0;
  for (int r = 0; r < rows; ++r) value += phase2[basis[r]] * t[r][width];
  return value;
}

// min sum C_ij pi_ij over pi >= 0 with row sums mu and column sums in
// [alpha m_j, beta m_j]. Variables: pi (k k_v), w_j = nu_j - alpha m_j, and
// slack z_j = (beta - alpha) m_j - w_j.
inline std::optional<double> ProjectionLpValue(const CostMatrix& cost,
                                               const Distribution& mu,
                                               const LdpPolytope& q) {
  const int k = cost.input_size();
  const int kv = cost.output_size();
  const int n = k * kv + 2 * kv;
  std::vector<std::vector<double>> a;
  std::vector<double> b;
  for (int i = 0; i < k; ++i) {
    std::vector<double> row(n, 0.0);
    for (int j = 0; j < kv; ++j) row[i * kv + j] = 1.0;
    a.push_back(row);
    b.push_back(mu[i]);
  }
  for (int j = 0; j < kv; ++j) {
    std::vector<double> row(n, 0.0);
    for (int i = 0; i < k; ++i) row[i * kv + j] = 1.0;
    row[k * kv + j] = -1.0;
    a.push_back(row);
    b.push_back(q.lower(j));
  }
  for (int j = 0; j < kv; ++j) {
    std::vector<double> row(n, 0.0);
    row[k * kv + j] = 1.0;
    row[k * kv + kv + j] = 1.0;
    a.push_back(row);
    b.push_back(q.upper(j) - q.lower(j));
  }
  std::vector<double> c(n, 0.0);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < kv; ++j) c[i * kv + j] = cost(i, j);
  }
  return SolveStandardLp(a, b, c);
}

}  // namespace wproj::testing

#endif  // WPROJ_TESTS_LP_ORACLE_H_
