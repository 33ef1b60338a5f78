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

#include "soundsieve/model_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace soundsieve {

namespace {

constexpr const char* kMagicPrefix = "soundsieve-";
constexpr int kFormatVersion = 1;

double parse_double(const std::string& s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw std::runtime_error("bad number '" + s + "' in model file");
  }
  return v;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) {
    throw std::runtime_error("cannot format double");
  }
  return std::string(buf, ptr);
}

void ModelFile::set(const std::string& key, std::vector<std::string> fields) {
  for (auto& [k, v] : header) {
    if (k == key) {
      v = std::move(fields);
      return;
    }
  }
  header.emplace_back(key, std::move(fields));
}

void ModelFile::set(const std::string& key, long long value) {
  set(key, std::vector<std::string>{std::to_string(value)});
}

void ModelFile::set(const std::string& key, double value) {
  set(key, std::vector<std::string>{format_double(value)});
}

const std::vector<std::string>& ModelFile::get(const std::string& key) const {
  for (const auto& [k, v] : header) {
    if (k == key) {
      return v;
    }
  }
  throw std::runtime_error("model file (" + kind + ") is missing header key '" + key + "'");
}

long long ModelFile::get_int(const std::string& key, std::size_t index) const {
  const auto& fields = get(key);
  if (index >= fields.size()) {
    throw std::runtime_error("header key '" + key + "' has too few fields");
  }
  std::size_t used = 0;
  const long long v = std::stoll(fields[index], &used);
  if (used != fields[index].size()) {
    throw std::runtime_error("header key '" + key + "' is not an integer");
  }
  return v;
}

double ModelFile::get_double(const std::string& key, std::size_t index) const {
  const auto& fields = get(key);
  if (index >= fields.size()) {
    throw std::runtime_error("header key '" + key + "' has too few fields");
  }
  return parse_double(fields[index]);
}

void write_model_file(const std::filesystem::path& path, const ModelFile& file) {
  std::ofstream os(path);
  if (!os) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  os << kMagicPrefix << file.kind << ' ' << kFormatVersion << '\n';
  for (const auto& [key, fields] : file.header) {
    os << key;
    for (const auto& f : fields) {
      os << ' ' << f;
    }
    os << '\n';
  }
  os << "params " << file.values.size() << '\n';
  for (double v : file.values) {
    os << format_double(v) << '\n';
  }
  if (!os) {
    throw std::runtime_error("write failed for " + path.string());
  }
}

ModelFile read_model_file(const std::filesystem::path& path, const std::string& expected_kind) {
  std::ifstream is(path);
  if (!is) {
    throw std::runtime_error("cannot open model file " + path.string());
  }
  std::string line;
  if (!std::getline(is, line)) {
    throw std::runtime_error(path.string() + ": empty model file");
  }
  const std::string expected = std::string(kMagicPrefix) + expected_kind + " " +
                               std::to_string(kFormatVersion);
  if (line != expected) {
    throw std::runtime_error(path.string() + ": expected '" + expected + "', found '" + line +
                             "'");
  }
  ModelFile file;
  file.kind = expected_kind;
  while (std::getline(is, line)) {
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key.empty()) {
      continue;
    }
    if (key == "params") {
      std::size_t n = 0;
      if (!(ls >> n)) {
        throw std::runtime_error(path.string() + ": bad params line");
      }
      file.values.reserve(n);
      for (std::size_t i = 0; i < n; ++i) {
        if (!std::getline(is, line)) {
          throw std::runtime_error(path.string() + ": expected " + std::to_string(n) +
                                   " parameters, found " + std::to_string(i));
        }
        file.values.push_back(parse_double(line));
      }
      return file;
    }
    std::vector<std::string> fields;
    std::string f;
    while (ls >> f) {
      fields.push_back(f);
    }
    file.header.emplace_back(key, std::move(fields));
  }
  throw std::runtime_error(path.string() + ": missing params section");
}

}  // namespace soundsieve
