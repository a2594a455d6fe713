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

// Baseline LDP mechanisms on the same index set as the projection mechanism.

#ifndef WPROJ_BASELINES_H_
#define WPROJ_BASELINES_H_

#include <vector>

#include "absl/status/statusor.h"
#include "wproj/geometry.h"
#include "wproj/polytope.h"

namespace wproj {

// KL projection mechanism: floors every probability at 1/(e^eps + k - 1) and
// rescales the rest, x -> max(mu(x) / r, floor).
struct KpmParams {
  int k = 0;
  double epsilon = 0.0;

  double floor() const;
};

// The base measure e^{eps/2} / (e^eps + k - 1) whose polytope contains every
// KPM output.
std::vector<double> KpmBaseMeasure(const KpmParams& params);

absl::StatusOr<Distribution> KpmTransform(const KpmParams& params,
                                          const Distribution& mu);

struct ExpMechParams {
  CostMatrix cost;
  double epsilon = 0.0;
  double sensitivity = 0.0;
};

// max_{i,i',j} |d(i,j) - d(i',j)| with d = C^{1/p}.
double DefaultSensitivity(const CostMatrix& cost);

// output(j) proportional to exp(eps u(mu, j) / (2 sensitivity)),
// u(mu, j) = -sum_i mu_i d(i, j).
absl::StatusOr<Distribution> ExpMechanism(const ExpMechParams& params,
                                          const Distribution& mu);

}  // namespace wproj

#endif  // WPROJ_BASELINES_H_
