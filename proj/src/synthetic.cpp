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

#include "soundsieve/synthetic.hpp"

#include "soundsieve/random.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace soundsieve {

double SyntheticSpec::window_begin_ms(int k) const {
  return burst_start_ms.at(static_cast<std::size_t>(k)) - jitter_ms;
}

double SyntheticSpec::window_end_ms(int k) const {
  return burst_start_ms.at(static_cast<std::size_t>(k)) + jitter_ms + burst_ms;
}

void SyntheticSpec::validate() const {
  if (n_classes < 1 || clips_per_class < 1) {
    throw std::invalid_argument("synthetic corpus needs at least one class and one clip");
  }
  if (static_cast<int>(tone_hz.size()) != n_classes ||
      static_cast<int>(burst_start_ms.size()) != n_classes) {
    throw std::invalid_argument("synthetic spec needs one tone and one burst window per class");
  }
  if (!(clip_seconds_min > 0.0) || clip_seconds_max < clip_seconds_min) {
    throw std::invalid_argument("invalid synthetic clip duration range");
  }
  if (!(burst_ms > 0.0) || jitter_ms < 0.0 || noise_floor < 0.0 || tone_amplitude < 0.0) {
    throw std::invalid_argument("invalid synthetic burst or amplitude settings");
  }
  if (tone_amplitude + noise_floor > 1.0) {
    throw std::invalid_argument("synthetic amplitude exceeds full scale");
  }
  for (int k = 0; k < n_classes; ++k) {
    const double hz = tone_hz[static_cast<std::size_t>(k)];
    if (!(hz > 0.0) || hz >= kSampleRate / 2.0) {
      throw std::invalid_argument("tone frequency must lie in (0, 2500) Hz");
    }
    if (window_begin_ms(k) < 0.0 || window_end_ms(k) > 1000.0 * clip_seconds_min) {
      throw std::invalid_argument("burst window of class " + std::to_string(k) +
                                  " does not fit inside the shortest clip");
    }
  }
}

std::vector<std::string> synthetic_class_names(const SyntheticSpec& spec) {
  std::vector<std::string> names;
  for (double hz : spec.tone_hz) {
    names.push_back("tone" + std::to_string(static_cast<int>(std::lround(hz))));
  }
  return names;
}

std::vector<AudioClip> gen_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  const auto names = synthetic_class_names(spec);
  std::vector<AudioClip> clips;
  clips.reserve(static_cast<std::size_t>(spec.n_classes * spec.clips_per_class));
  for (int k = 0; k < spec.n_classes; ++k) {
    for (int c = 0; c < spec.clips_per_class; ++c) {
      Rng rng(Rng::mix(spec.seed, static_cast<std::uint64_t>(k) * 1000003ULL + c));
      // Durations are whole segments.
      const double seconds = spec.clip_seconds_min +
                             rng.uniform() * (spec.clip_seconds_max - spec.clip_seconds_min);
      const auto n_seg = static_cast<int>(std::floor(seconds * 1000.0 / kSegmentMs + 1e-9));
      const std::size_t n = static_cast<std::size_t>(n_seg) * kSampleRate * kSegmentMs / 1000;

      AudioClip clip;
      clip.sample_rate = kSampleRate;
      clip.label = k;
      clip.clip_id = names[static_cast<std::size_t>(k)] + "/" + std::to_string(c);
      clip.samples.resize(n);
      for (double& x : clip.samples) {
        x = spec.noise_floor > 0.0 ? rng.uniform(-spec.noise_floor, spec.noise_floor) : 0.0;
      }
      const double start_ms = spec.burst_start_ms[static_cast<std::size_t>(k)] +
                              rng.uniform(-spec.jitter_ms, spec.jitter_ms);
      const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
      const double hz = spec.tone_hz[static_cast<std::size_t>(k)];
      const auto first = static_cast<std::size_t>(std::lround(start_ms * kSampleRate / 1000.0));
      const auto len = static_cast<std::size_t>(std::lround(spec.burst_ms * kSampleRate / 1000.0));
      for (std::size_t i = first; i < std::min(n, first + len); ++i) {
        const double t = static_cast<double>(i) / kSampleRate;
        clip.samples[i] += spec.tone_amplitude * std::sin(2.0 * std::numbers::pi * hz * t + phase);
      }
      clips.push_back(std::move(clip));
    }
  }
  return clips;
}

}  // namespace soundsieve
