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

#include "wproj/io.h"

#include <filesystem>
#include <string>

#include "gtest/gtest.h"

namespace wproj {
namespace {

TEST(CostMatrixIoTest, CsvAndJsonRoundTrip) {
  const CostMatrix c = *BuildCostMatrix(GridSpace{2, 3, 0.7}, 1.5);
  absl::StatusOr<CostMatrix> from_csv = ParseCostMatrixCsv(CostMatrixToCsv(c));
  ASSERT_TRUE(from_csv.ok()) << from_csv.status();
  EXPECT_EQ(from_csv->costs(), c.costs());
  EXPECT_EQ(from_csv->p(), 1.5);
  absl::StatusOr<CostMatrix> from_json =
      ParseCostMatrixJson(CostMatrixToJson(c));
  ASSERT_TRUE(from_json.ok()) << from_json.status();
  EXPECT_EQ(from_json->costs(), c.costs());
}

TEST(CostMatrixIoTest, RejectsMalformed) {
  EXPECT_FALSE(ParseCostMatrixCsv("k,k_v,p\n2,2,1\n0,1\n").ok());
  EXPECT_FALSE(ParseCostMatrixCsv("k,k_v,p\n1,2,1\n0,x\n").ok());
  EXPECT_FALSE(ParseCostMatrixJson(R"({"p": 1, "costs": [[0, 1], [1]]})").ok());
  EXPECT_FALSE(ParseCostMatrixJson(R"({"p": 1, "costs": [[0, -1]]})").ok());
  EXPECT_FALSE(ParseCostMatrixJson("not json").ok());
}

TEST(CostMatrixIoTest, FileRoundTripDispatchesOnExtension) {
  const CostMatrix c = *BuildCostMatrix(RingSpace{5}, 2.0);
  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() / "wproj_io_test";
  std::filesystem::create_directories(dir);
  const std::string json_path = (dir / "c.json").string();
  const std::string csv_path = (dir / "c.csv").string();
  ASSERT_TRUE(WriteFile(json_path, CostMatrixToJson(c)).ok());
  ASSERT_TRUE(WriteFile(csv_path, CostMatrixToCsv(c)).ok());
  EXPECT_EQ(LoadCostMatrix(json_path)->costs(), c.costs());
  EXPECT_EQ(LoadCostMatrix(csv_path)->costs(), c.costs());
  EXPECT_FALSE(ReadFile((dir / "missing").string()).ok());
  std::filesystem::remove_all(dir);
}

TEST(PointCloudIoTest, ParsesBothFormats) {
  absl::StatusOr<PointCloud> csv =
      ParsePointCloudCsv("n,dim,metric\n2,3,cosine\n1,0,0\n0,1,0\n");
  ASSERT_TRUE(csv.ok()) << csv.status();
  EXPECT_EQ(csv->metric, Metric::kCosine);
  EXPECT_EQ(csv->points.size(), 2u);
  absl::StatusOr<PointCloud> json = ParsePointCloudJson(
      R"({"metric": "euclidean", "points": [[0, 0], [3, 4]]})");
  ASSERT_TRUE(json.ok()) << json.status();
  EXPECT_DOUBLE_EQ(PointDistance(*json, 0, 1), 5.0);
  EXPECT_FALSE(
      ParsePointCloudJson(R"({"metric": "l7", "points": [[0]]})").ok());
}

TEST(VectorIoTest, AcceptsEachFormat) {
  EXPECT_EQ(ParseVector("[0.25, 0.75]")->values,
            (std::vector<double>{0.25, 0.75}));
  absl::StatusOr<VectorFile> m = ParseVector(R"({"m": [1, 2], "epsilon": 3})");
  ASSERT_TRUE(m.ok());
  EXPECT_EQ(m->values, (std::vector<double>{1, 2}));
  EXPECT_EQ(m->epsilon, 3.0);
  EXPECT_EQ(ParseVector(R"({"probs": [1]})")->values, std::vector<double>{1});
  EXPECT_EQ(ParseVector("0.1,0.2\n0.7")->values,
            (std::vector<double>{0.1, 0.2, 0.7}));
  EXPECT_EQ(ParseVector("0.5 0.5")->values, (std::vector<double>{0.5, 0.5}));
  EXPECT_FALSE(ParseVector("").ok());
  EXPECT_FALSE(ParseVector("0.5,abc").ok());
}

}  // namespace
}  // namespace wproj
