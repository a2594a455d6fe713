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

// File formats.
//
// Cost matrix CSV:   "k,k_v,p" / "<k>,<k_v>,<p>" / k rows of k_v costs.
// Cost matrix JSON:  {"p": 2, "costs": [[...], ...]}.
// Point cloud CSV:   "n,dim,metric" / "<n>,<dim>,euclidean|cosine" / n rows.
// Point cloud JSON:  {"metric": "euclidean", "points": [[...], ...]}.
// Vectors (mu, m):   JSON array, JSON {"probs": [...]} or {"m": [...],
//                    "epsilon": e}, or CSV with values separated by commas
//                    and/or newlines.

#ifndef WPROJ_IO_H_
#define WPROJ_IO_H_

#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "wproj/geometry.h"
#include "wproj/polytope.h"

namespace wproj {

absl::StatusOr<std::string> ReadFile(const std::string& path);
absl::Status WriteFile(const std::string& path, const std::string& contents);

absl::StatusOr<CostMatrix> ParseCostMatrixCsv(const std::string& text);
absl::StatusOr<CostMatrix> ParseCostMatrixJson(const std::string& text);
// Dispatches on the extension (.json, otherwise CSV).
absl::StatusOr<CostMatrix> LoadCostMatrix(const std::string& path);
std::string CostMatrixToCsv(const CostMatrix& cost);
std::string CostMatrixToJson(const CostMatrix& cost);

absl::StatusOr<PointCloud> ParsePointCloudCsv(const std::string& text);
absl::StatusOr<PointCloud> ParsePointCloudJson(const std::string& text);
absl::StatusOr<PointCloud> LoadPointCloud(const std::string& path);

struct VectorFile {
  std::vector<double> values;
  std::optional<double> epsilon;  // only from {"m": ..., "epsilon": ...}
};

absl::StatusOr<VectorFile> ParseVector(const std::string& text);
absl::StatusOr<VectorFile> LoadVector(const std::string& path);
absl::StatusOr<Distribution> LoadDistribution(const std::string& path);

}  // namespace wproj

#endif  // WPROJ_IO_H_
