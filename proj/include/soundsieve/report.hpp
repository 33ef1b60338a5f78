// Copyright 2026 The soundsieve Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace soundsieve {

inline constexpr const char* kReportHeader =
    "dataset,sampler,C,accuracy,recall,sensed_fraction,n_clips,seed";

/// One (dataset, sampler, C) cell of an experiment. The clean row uses C = 0.
struct ResultRow {
  std::string dataset;
  std::string sampler;
  double C = 0.0;
  double accuracy = 0.0;
  double recall = 0.0;
  double sensed_fraction = 0.0;
  int n_clips = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

/// Rows sorted by (dataset, sampler, C); ties keep their input order.
std::vector<ResultRow> sorted_rows(std::vector<ResultRow> rows);

/// CSV text with the fixed header and rows in sorted order.
std::string format_report(const std::vector<ResultRow>& rows);

/// Throws std::runtime_error when the path cannot be written.
void write_report(const std::filesystem::path& path, const std::vector<ResultRow>& rows);

/// Throws std::runtime_error on a wrong header or malformed row.
std::vector<ResultRow> read_report(const std::filesystem::path& path);

}  // namespace soundsieve
