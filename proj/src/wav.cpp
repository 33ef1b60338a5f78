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

#include "soundsieve/audio.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <stdexcept>

namespace soundsieve {

namespace {

std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void put_u32(std::ostream& os, std::uint32_t v) {
  const char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                     static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
  os.write(b, 4);
}

void put_u16(std::ostream& os, std::uint16_t v) {
  const char b[2] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff)};
  os.write(b, 2);
}

[[noreturn]] void reject(const std::filesystem::path& path, const std::string& why) {
  throw std::runtime_error(path.string() + ": " + why);
}

}  // namespace

AudioClip load_wav(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) {
    reject(path, "cannot open file");
  }
  const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(is)),
                                         std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    reject(path, "malformed RIFF/WAVE header");
  }

  bool have_fmt = false;
  int rate = 0;
  const unsigned char* data = nullptr;
  std::size_t data_len = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    const std::size_t len = read_u32(chunk + 4);
    const std::size_t body = pos + 8;
    if (body + len > bytes.size()) {
      // Some writers leave a bogus length on the final data chunk.
      if (std::memcmp(chunk, "data", 4) != 0) {
        reject(path, "truncated chunk");
      }
    }
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (len < 16) {
        reject(path, "fmt chunk too short");
      }
      const std::uint16_t format = read_u16(chunk + 8);
      const std::uint16_t channels = read_u16(chunk + 10);
      rate = static_cast<int>(read_u32(chunk + 12));
      const std::uint16_t bits = read_u16(chunk + 22);
      if (format != 1) {
        reject(path, "only PCM encoding is supported (format tag " + std::to_string(format) + ")");
      }
      if (channels != 1) {
        reject(path, "expected mono audio, found " + std::to_string(channels) + " channels");
      }
      if (bits != 16) {
        reject(path, "expected 16-bit samples, found " + std::to_string(bits) + "-bit");
      }
      if (rate <= 0) {
        reject(path, "invalid sample rate");
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = bytes.data() + body;
      data_len = std::min(len, bytes.size() - body);
      break;
    }
    pos = body + len + (len & 1);
  }
  if (!have_fmt) {
    reject(path, "missing fmt chunk");
  }
  if (data == nullptr) {
    reject(path, "missing data chunk");
  }

  std::vector<double> samples(data_len / 2);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto raw = static_cast<std::int16_t>(read_u16(data + 2 * i));
    samples[i] = static_cast<double>(raw) / 32768.0;
  }

  AudioClip clip;
  clip.sample_rate = kSampleRate;
  clip.samples = resample_linear(samples, rate, kSampleRate);
  clip.clip_id = path.stem().string();
  clip.validate();
  return clip;
}

void write_wav(const std::filesystem::path& path, const AudioClip& clip) {
  clip.validate();
  std::ofstream os(path, std::ios::binary);
  if (!os) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  const auto n = static_cast<std::uint32_t>(clip.samples.size());
  os.write("RIFF", 4);
  put_u32(os, 36 + 2 * n);
  os.write("WAVE", 4);
  os.write("fmt ", 4);
  put_u32(os, 16);
  put_u16(os, 1);
  put_u16(os, 1);
  put_u32(os, static_cast<std::uint32_t>(clip.sample_rate));
  put_u32(os, static_cast<std::uint32_t>(clip.sample_rate) * 2);
  put_u16(os, 2);
  put_u16(os, 16);
  os.write("data", 4);
  put_u32(os, 2 * n);
  for (double s : clip.samples) {
    const double scaled = std::round(std::clamp(s, -1.0, 1.0) * 32768.0);
    put_u16(os, static_cast<std::uint16_t>(
                    static_cast<std::int16_t>(std::clamp(scaled, -32768.0, 32767.0))));
  }
  if (!os) {
    throw std::runtime_error("write failed for " + path.string());
  }
}

}  // namespace soundsieve
