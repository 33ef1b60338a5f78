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

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace soundsieve {

/// Line-oriented text model format shared by every persisted model:
///
///   soundsieve-<kind> 1
///   <key> <value> [<value> ...]      (zero or more header lines)
///   params <count>
///   <one parameter per line, 17 significant digits>
struct ModelFile {
  std::string kind;
  std::vector<std::pair<std::string, std::vector<std::string>>> header;
  std::vector<double> values;

  void set(const std::string& key, std::vector<std::string> fields);
  void set(const std::string& key, long long value);
  void set(const std::string& key, double value);

  const std::vector<std::string>& get(const std::string& key) const;
  long long get_int(const std::string& key, std::size_t index = 0) const;
  double get_double(const std::string& key, std::size_t index = 0) const;
};

void write_model_file(const std::filesystem::path& path, const ModelFile& file);

/// Throws std::runtime_error on malformed input or a kind mismatch.
ModelFile read_model_file(const std::filesystem::path& path, const std::string& expected_kind);

/// Shortest decimal form that round-trips a double exactly.
std::string format_double(double value);

}  // namespace soundsieve
