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

#include <string>
#include <vector>

namespace soundsieve {

/// Per-segment sense/skip bits; true means the segment was observed.
struct SegmentMask {
  std::vector<bool> bits;

  SegmentMask() = default;
  explicit SegmentMask(std::vector<bool> b) : bits(std::move(b)) {}

  static SegmentMask all(int n, bool value = true) {
    return SegmentMask(std::vector<bool>(static_cast<std::size_t>(n), value));
  }

  int size() const { return static_cast<int>(bits.size()); }
  bool operator[](int i) const { return bits[static_cast<std::size_t>(i)]; }
  int count() const;
  bool all_set() const { return count() == size(); }
  bool none_set() const { return count() == 0; }

  /// "1011..." rendering, mostly for logs and test failure messages.
  std::string to_string() const;

  friend bool operator==(const SegmentMask&, const SegmentMask&) = default;
};

/// A run of missing frames [t_s, t_e], inclusive.
struct GapBounds {
  int t_s = 0;
  int t_e = 0;

  friend bool operator==(const GapBounds&, const GapBounds&) = default;
};

/// Maximal runs of missing frames implied by the segment mask.
std::vector<GapBounds> find_gaps(const SegmentMask& mask, const SegmentView& view);

/// Fills every frame of every missing segment. Interior gaps are interpolated
/// from both ends inward; each pass fills the outermost two frames from the
/// current anchors X(t_s - 1) and X(t_e + 1), then narrows the gap. Leading and
/// trailing gaps replicate the nearest observed frame. Throws when no segment
/// is observed.
Spectrogram impute(const Spectrogram& spec, const SegmentMask& mask, const SegmentView& view);

/// Missing frames set to zero ("do nothing" baseline).
Spectrogram zero_fill(const Spectrogram& spec, const SegmentMask& mask, const SegmentView& view);

}  // namespace soundsieve
