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

#include "soundsieve/report.hpp"

#include "soundsieve/model_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace soundsieve {

std::vector<ResultRow> sorted_rows(std::vector<ResultRow> rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
    return std::tie(a.dataset, a.sampler, a.C) < std::tie(b.dataset, b.sampler, b.C);
  });
  return rows;
}

std::string format_report(const std::vector<ResultRow>& rows) {
  std::ostringstream os;
  os << kReportHeader << '\n';
  for (const auto& r : sorted_rows(rows)) {
    if (r.dataset.find(',') != std::string::npos || r.sampler.find(',') != std::string::npos) {
      throw std::invalid_argument("dataset and sampler names may not contain commas");
    }
    os << r.dataset << ',' << r.sampler << ',' << format_double(r.C) << ','
       << format_double(r.accuracy) << ',' << format_double(r.recall) << ','
       << format_double(r.sensed_fraction) << ',' << r.n_clips << ',' << r.seed << '\n';
  }
  return os.str();
}

void write_report(const std::filesystem::path& path, const std::vector<ResultRow>& rows) {
  const std::string text = format_report(rows);
  std::ofstream os(path, std::ios::binary);
  if (!os) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  os << text;
  if (!os) {
    throw std::runtime_error("failed writing " + path.string());
  }
}

std::vector<ResultRow> read_report(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) {
    throw std::runtime_error("cannot open " + path.string());
  }
  std::string line;
  if (!std::getline(is, line) || line != kReportHeader) {
    throw std::runtime_error(path.string() + ": unexpected report header");
  }
  std::vector<ResultRow> rows;
  int line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    std::vector<std::string> f;
    std::istringstream ls(line);
    for (std::string field; std::getline(ls, field, ',');) {
      f.push_back(field);
    }
    if (f.size() != 8) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": expected 8 fields");
    }
    try {
      rows.push_back({f[0], f[1], std::stod(f[2]), std::stod(f[3]), std::stod(f[4]),
                      std::stod(f[5]), std::stoi(f[6]), std::stoull(f[7])});
    } catch (const std::logic_error&) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": malformed number");
    }
  }
  return rows;
}

}  // namespace soundsieve
