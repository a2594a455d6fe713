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

// Empirical epsilon-LDP check for distribution-valued mechanisms on a finite
// space, and sampling from their outputs.
//
// For each output coordinate j the audit takes the largest and smallest
// out(j) over the evaluated inputs; the mechanism passes when every such
// max/min ratio is at most e^eps. On a finite space singleton ratios control
// all sets, so over Dirac inputs this is exact for projection mechanisms. For
// other mechanisms it is a stress test only.

#ifndef WPROJ_PRIVACY_AUDIT_H_
#define WPROJ_PRIVACY_AUDIT_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "wproj/polytope.h"

namespace wproj {

using Mechanism =
    std::function<absl::StatusOr<Distribution>(const Distribution&)>;

struct AuditWitness {
  int input_high = -1;  // input index with the larger out(j)
  int input_low = -1;
  int coordinate = -1;
};

struct AuditReport {
  double max_log_ratio = 0.0;  // +inf when some out(j) is 0 for one input only
  AuditWitness witness;
  double epsilon_claimed = 0.0;
  double tolerance = 0.0;
  int num_inputs = 0;  // inputs 0..k-1 are the Diracs, then the extras
  bool pass = false;
};

inline constexpr double kAuditTolerance = 1e-9;

// Evaluates the mechanism on the k Dirac inputs followed by extra_inputs.
// Fails if the mechanism fails or outputs of different lengths are returned.
absl::StatusOr<AuditReport> AuditLdp(
    const Mechanism& mechanism, int k, double epsilon,
    const std::vector<Distribution>& extra_inputs = {},
    double tolerance = kAuditTolerance);

// Same reduction over already computed outputs.
absl::StatusOr<AuditReport> AuditOutputs(
    const std::vector<Distribution>& outputs, double epsilon,
    double tolerance = kAuditTolerance);

std::string AuditReportJson(const AuditReport& report);

// n draws by inverse CDF; draw t uses counter t of the seed's stream.
std::vector<int> Sample(const Distribution& nu, std::uint64_t seed, int n);

}  // namespace wproj

#endif  // WPROJ_PRIVACY_AUDIT_H_
