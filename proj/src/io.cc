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

#include <fstream>
#include <sstream>

#include "absl/strings/ascii.h"
#include "absl/strings/match.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "json.hpp"

namespace wproj {
namespace {

using json = nlohmann::json;

absl::StatusOr<std::vector<double>> ParseNumbers(absl::string_view line) {
  std::vector<double> out;
  for (absl::string_view field :
       absl::StrSplit(line, absl::ByAnyChar(",\n\r\t "), absl::SkipEmpty())) {
    double x = 0.0;
    if (!absl::SimpleAtod(field, &x)) {
      return absl::InvalidArgumentError(
          absl::StrCat("not a number: '", field, "'"));
    }
    out.push_back(x);
  }
  return out;
}

std::vector<std::string> Lines(const std::string& text) {
  std::vector<std::string> lines;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    absl::string_view s = absl::StripAsciiWhitespace(line);
    if (!s.empty() && s.front() != '#') lines.emplace_back(s);
  }
  return lines;
}

absl::StatusOr<json> ParseJson(const std::string& text) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) return absl::InvalidArgumentError("malformed JSON");
  return j;
}

absl::StatusOr<std::vector<double>> JsonNumbers(const json& j) {
  if (!j.is_array()) return absl::InvalidArgumentError("expected an array");
  std::vector<double> out;
  for (const json& x : j) {
    if (!x.is_number()) {
      return absl::InvalidArgumentError("expected an array of numbers");
    }
    out.push_back(x.get<double>());
  }
  return out;
}

absl::StatusOr<Metric> ParseMetric(absl::string_view name) {
  if (name == "euclidean") return Metric::kEuclidean;
  if (name == "cosine") return Metric::kCosine;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown metric '", name, "'"));
}

bool IsJsonPath(const std::string& path) {
  return absl::EndsWithIgnoreCase(path, ".json");
}

}  // namespace

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

absl::Status WriteFile(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    return absl::PermissionDeniedError(absl::StrCat("cannot write ", path));
  out << contents;
  out.close();
  if (!out) return absl::DataLossError(absl::StrCat("write failed: ", path));
  return absl::OkStatus();
}

absl::StatusOr<CostMatrix> ParseCostMatrixCsv(const std::string& text) {
  const std::vector<std::string> lines = Lines(text);
  if (lines.size() < 2 || absl::StripAsciiWhitespace(lines[0]) != "k,k_v,p") {
    return absl::InvalidArgumentError("cost CSV must start with 'k,k_v,p'");
  }
  absl::StatusOr<std::vector<double>> dims = ParseNumbers(lines[1]);
  if (!dims.ok()) return dims.status();
  if (dims->size() != 3) {
    return absl::InvalidArgumentError("cost CSV header needs k, k_v and p");
  }
  const int k = static_cast<int>((*dims)[0]);
  const int kv = static_cast<int>((*dims)[1]);
  if (k < 1 || kv < 1 || static_cast<int>(lines.size()) != 2 + k) {
    return absl::InvalidArgumentError(absl::StrCat(
        "cost CSV declares ", k, " rows but has ", lines.size() - 2));
  }
  Matrix c(k, kv);
  for (int i = 0; i < k; ++i) {
    absl::StatusOr<std::vector<double>> row = ParseNumbers(lines[2 + i]);
    if (!row.ok()) return row.status();
    if (static_cast<int>(row->size()) != kv) {
      return absl::InvalidArgumentError(
          absl::StrCat("cost CSV row ", i, " has ", row->size(), " entries"));
    }
    for (int j = 0; j < kv; ++j) c(i, j) = (*row)[j];
  }
  return CostMatrix::Create(std::move(c), (*dims)[2]);
}

absl::StatusOr<CostMatrix> ParseCostMatrixJson(const std::string& text) {
  absl::StatusOr<json> j = ParseJson(text);
  if (!j.ok()) return j.status();
  if (!j->is_object() || !j->contains("costs") || !(*j)["costs"].is_array() ||
      (*j)["costs"].empty()) {
    return absl::InvalidArgumentError("cost JSON needs a nonempty 'costs'");
  }
  const double p = j->value("p", 1.0);
  const json& rows = (*j)["costs"];
  const int k = static_cast<int>(rows.size());
  int kv = -1;
  Matrix c;
  for (int i = 0; i < k; ++i) {
    absl::StatusOr<std::vector<double>> row = JsonNumbers(rows[i]);
    if (!row.ok()) return row.status();
    if (kv < 0) {
      kv = static_cast<int>(row->size());
      c = Matrix(k, kv);
    }
    if (static_cast<int>(row->size()) != kv || kv == 0) {
      return absl::InvalidArgumentError("cost JSON rows differ in length");
    }
    for (int jj = 0; jj < kv; ++jj) c(i, jj) = (*row)[jj];
  }
  return CostMatrix::Create(std::move(c), p);
}

absl::StatusOr<CostMatrix> LoadCostMatrix(const std::string& path) {
  absl::StatusOr<std::string> text = ReadFile(path);
  if (!text.ok()) return text.status();
  return IsJsonPath(path) ? ParseCostMatrixJson(*text)
                          : ParseCostMatrixCsv(*text);
}

std::string CostMatrixToCsv(const CostMatrix& cost) {
  std::string out = absl::StrCat("k,k_v,p\n", cost.input_size(), ",",
                                 cost.output_size(), ",", cost.p(), "\n");
  for (int i = 0; i < cost.input_size(); ++i) {
    for (int j = 0; j < cost.output_size(); ++j) {
      absl::StrAppend(&out, j ? "," : "", json(cost(i, j)).dump());
    }
    out += "\n";
  }
  return out;
}

std::string CostMatrixToJson(const CostMatrix& cost) {
  json rows = json::array();
  for (int i = 0; i < cost.input_size(); ++i) {
    const auto r = cost.row(i);
    rows.push_back(std::vector<double>(r.begin(), r.end()));
  }
  nlohmann::ordered_json j;
  j["p"] = cost.p();
  j["costs"] = std::move(rows);
  return j.dump() + "\n";
}

absl::StatusOr<PointCloud> ParsePointCloudCsv(const std::string& text) {
  const std::vector<std::string> lines = Lines(text);
  if (lines.size() < 2 || lines[0] != "n,dim,metric") {
    return absl::InvalidArgumentError(
        "point cloud CSV must start with 'n,dim,metric'");
  }
  std::vector<std::string> header = absl::StrSplit(lines[1], ',');
  int n = 0;
  int dim = 0;
  if (header.size() != 3 || !absl::SimpleAtoi(header[0], &n) ||
      !absl::SimpleAtoi(header[1], &dim) || n < 1 || dim < 1) {
    return absl::InvalidArgumentError("bad point cloud CSV header");
  }
  absl::StatusOr<Metric> metric =
      ParseMetric(absl::StripAsciiWhitespace(header[2]));
  if (!metric.ok()) return metric.status();
  if (static_cast<int>(lines.size()) != 2 + n) {
    return absl::InvalidArgumentError(absl::StrCat(
        "point cloud CSV declares ", n, " points but has ", lines.size() - 2));
  }
  PointCloud cloud;
  cloud.metric = *metric;
  for (int i = 0; i < n; ++i) {
    absl::StatusOr<std::vector<double>> pt = ParseNumbers(lines[2 + i]);
    if (!pt.ok()) return pt.status();
    if (static_cast<int>(pt->size()) != dim) {
      return absl::InvalidArgumentError(
          absl::StrCat("point ", i, " has ", pt->size(), " coordinates"));
    }
    cloud.points.push_back(*std::move(pt));
  }
  absl::Status valid = ValidateSpace(cloud);
  if (!valid.ok()) return valid;
  return cloud;
}

absl::StatusOr<PointCloud> ParsePointCloudJson(const std::string& text) {
  absl::StatusOr<json> j = ParseJson(text);
  if (!j.ok()) return j.status();
  if (!j->is_object() || !j->contains("points")) {
    return absl::InvalidArgumentError("point cloud JSON needs 'points'");
  }
  PointCloud cloud;
  absl::StatusOr<Metric> metric =
      ParseMetric(j->value("metric", std::string("euclidean")));
  if (!metric.ok()) return metric.status();
  cloud.metric = *metric;
  for (const json& p : (*j)["points"]) {
    absl::StatusOr<std::vector<double>> pt = JsonNumbers(p);
    if (!pt.ok()) return pt.status();
    cloud.points.push_back(*std::move(pt));
  }
  absl::Status valid = ValidateSpace(cloud);
  if (!valid.ok()) return valid;
  return cloud;
}

absl::StatusOr<PointCloud> LoadPointCloud(const std::string& path) {
  absl::StatusOr<std::string> text = ReadFile(path);
  if (!text.ok()) return text.status();
  return IsJsonPath(path) ? ParsePointCloudJson(*text)
                          : ParsePointCloudCsv(*text);
}

absl::StatusOr<VectorFile> ParseVector(const std::string& text) {
  VectorFile out;
  const absl::string_view trimmed = absl::StripAsciiWhitespace(text);
  if (!trimmed.empty() && (trimmed.front() == '[' || trimmed.front() == '{')) {
    absl::StatusOr<json> j = ParseJson(text);
    if (!j.ok()) return j.status();
    const json* values = &*j;
    if (j->is_object()) {
      if (j->contains("m")) {
        values = &(*j)["m"];
      } else if (j->contains("probs")) {
        values = &(*j)["probs"];
      } else {
        return absl::InvalidArgumentError("expected 'm' or 'probs'");
      }
      if (j->contains("epsilon")) out.epsilon = (*j)["epsilon"].get<double>();
    }
    absl::StatusOr<std::vector<double>> v = JsonNumbers(*values);
    if (!v.ok()) return v.status();
    out.values = *std::move(v);
  } else {
    absl::StatusOr<std::vector<double>> v = ParseNumbers(text);
    if (!v.ok()) return v.status();
    out.values = *std::move(v);
  }
  if (out.values.empty()) return absl::InvalidArgumentError("empty vector");
  return out;
}

absl::StatusOr<VectorFile> LoadVector(const std::string& path) {
  absl::StatusOr<std::string> text = ReadFile(path);
  if (!text.ok()) return text.status();
  return ParseVector(*text);
}

absl::StatusOr<Distribution> LoadDistribution(const std::string& path) {
  absl::StatusOr<VectorFile> v = LoadVector(path);
  if (!v.ok()) return v.status();
  return Distribution::Create(std::move(v->values));
}

}  // namespace wproj
