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

// Small builders shared by the unit tests.

#include "soundsieve/audio.hpp"
#include "soundsieve/imputation.hpp"
#include "soundsieve/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace soundsieve::testing {

inline AudioClip tone(double hz, double seconds, double amplitude = 0.5, int rate = kSampleRate) {
  AudioClip clip;
  clip.sample_rate = rate;
  clip.clip_id = "tone";
  const int n = static_cast<int>(std::lround(seconds * rate));
  clip.samples.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    clip.samples[static_cast<std::size_t>(i)] =
        amplitude * std::sin(2.0 * std::numbers::pi * hz * i / rate);
  }
  return clip;
}

inline Spectrogram random_spectrogram(int n_frames, int n_bins, Rng& rng) {
  Spectrogram s;
  s.frames.resize(n_frames, n_bins);
  for (int t = 0; t < n_frames; ++t) {
    for (int f = 0; f < n_bins; ++f) {
      s.frames(t, f) = rng.uniform(0.0, 3.0);
    }
  }
  return s;
}

inline AnalyzedClip random_clip(int n_segments, int n_bins, Rng& rng, std::string id = "clip") {
  AnalyzedClip c;
  c.clip_id = std::move(id);
  c.label = 0;
  c.mel = random_spectrogram(n_segments * kFramesPerSegment, n_bins, rng);
  c.view = SegmentView::for_frames(c.mel.n_frames());
  return c;
}

inline SegmentMask mask_from(const std::string& bits) {
  std::vector<bool> b;
  for (char ch : bits) {
    b.push_back(ch == '1');
  }
  return SegmentMask(b);
}

// Alternating observed runs and gaps of 1..max_gap segments. The first run
// is a gap with probability 1/2, so prefix and suffix gaps both occur. At
// least one segment is always observed.
inline SegmentMask random_gap_mask(int n, Rng& rng, int max_gap = 8) {
  std::vector<bool> bits;
  bool observed = rng.bernoulli(0.5);
  while (static_cast<int>(bits.size()) < n) {
    const int len = observed ? 1 + static_cast<int>(rng.index(4))
                             : 1 + static_cast<int>(rng.index(static_cast<std::size_t>(max_gap)));
    for (int i = 0; i < len && static_cast<int>(bits.size()) < n; ++i) {
      bits.push_back(observed);
    }
    observed = !observed;
  }
  if (std::none_of(bits.begin(), bits.end(), [](bool b) { return b; })) {
    bits[rng.index(bits.size())] = true;
  }
  return SegmentMask(bits);
}

}  // namespace soundsieve::testing
