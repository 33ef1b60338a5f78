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

#include "soundsieve/audio.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace soundsieve {

/// Tone-burst corpus: every clip is uniform noise plus one burst of its
/// class's tone, placed in a class-specific window.
struct SyntheticSpec {
  int n_classes = 4;
  int clips_per_class = 125;
  double clip_seconds_min = 2.0;
  double clip_seconds_max = 2.0;
  std::vector<double> tone_hz{400.0, 800.0, 1400.0, 2000.0};
  /// Nominal burst start per class; the actual start is jittered uniformly
  /// by +/- jitter_ms.
  std::vector<double> burst_start_ms{100.0, 500.0, 850.0, 1200.0};
  double burst_ms = 300.0;
  double jitter_ms = 100.0;
  double tone_amplitude = 0.5;
  double noise_floor = 0.05;
  std::uint64_t seed = 1;

  /// Earliest and latest instant any class-k burst can occupy.
  double window_begin_ms(int k) const;
  double window_end_ms(int k) const;

  void validate() const;
};

/// Clips ordered by class, then by index within the class. Clip ids are
/// "<class name>/<index>".
std::vector<AudioClip> gen_synthetic(const SyntheticSpec& spec);

std::vector<std::string> synthetic_class_names(const SyntheticSpec& spec);

}  // namespace soundsieve
