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

#include "soundsieve/imputation.hpp"

#include <algorithm>
#include <stdexcept>

namespace soundsieve {

namespace {

void check_shapes(const Spectrogram& spec, const SegmentMask& mask, const SegmentView& view) {
  if (view.n_frames() != spec.n_frames()) {
    throw std::invalid_argument("segment view does not match spectrogram frame count");
  }
  if (mask.size() != view.n_segments()) {
    throw std::invalid_argument("mask length " + std::to_string(mask.size()) +
                                " does not match segment count " +
                                std::to_string(view.n_segments()));
  }
}

}  // namespace

int SegmentMask::count() const {
  return static_cast<int>(std::count(bits.begin(), bits.end(), true));
}

std::string SegmentMask::to_string() const {
  std::string s;
  s.reserve(bits.size());
  for (bool b : bits) {
    s.push_back(b ? '1' : '0');
  }
  return s;
}

std::vector<GapBounds> find_gaps(const SegmentMask& mask, const SegmentView& view) {
  if (mask.size() != view.n_segments()) {
    throw std::invalid_argument("mask length does not match segment count");
  }
  std::vector<GapBounds> gaps;
  const int n = view.n_frames();
  int f = 0;
  while (f < n) {
    if (mask[view.segment_of_frame(f)]) {
      ++f;
      continue;
    }
    GapBounds g{f, f};
    while (g.t_e + 1 < n && !mask[view.segment_of_frame(g.t_e + 1)]) {
      ++g.t_e;
    }
    gaps.push_back(g);
    f = g.t_e + 1;
  }
  return gaps;
}

Spectrogram impute(const Spectrogram& spec, const SegmentMask& mask, const SegmentView& view) {
  check_shapes(spec, mask, view);
  if (mask.none_set()) {
    throw std::invalid_argument("cannot impute: no observed segment to anchor interpolation");
  }
  Spectrogram out = spec;
  Matrix& x = out.frames;
  const int last = spec.n_frames() - 1;

  for (GapBounds g : find_gaps(mask, view)) {
    if (g.t_s == 0) {
      for (int t = g.t_s; t <= g.t_e; ++t) {
        x.row(t) = x.row(g.t_e + 1);
      }
      continue;
    }
    if (g.t_e == last) {
      for (int t = g.t_s; t <= g.t_e; ++t) {
        x.row(t) = x.row(g.t_s - 1);
      }
      continue;
    }
    int ts = g.t_s;
    int te = g.t_e;
    while (ts <= te) {
      const double lo = ts - 1;
      const double span = (te + 1) - lo;
      const double r_s = (ts - lo) / span;
      const double r_e = (te - lo) / span;
      const auto left = x.row(ts - 1);
      const auto right = x.row(te + 1);
      if (ts == te) {
        x.row(ts) = (1.0 - r_s) * left + r_s * right;
      } else {
        const Eigen::RowVectorXd at_s = (1.0 - r_s) * left + r_s * right;
        const Eigen::RowVectorXd at_e = (1.0 - r_e) * left + r_e * right;
        x.row(ts) = at_s;
        x.row(te) = at_e;
      }
      ++ts;
      --te;
    }
  }
  return out;
}

Spectrogram zero_fill(const Spectrogram& spec, const SegmentMask& mask, const SegmentView& view) {
  check_shapes(spec, mask, view);
  Spectrogram out = spec;
  for (const GapBounds& g : find_gaps(mask, view)) {
    out.frames.middleRows(g.t_s, g.t_e - g.t_s + 1).setZero();
  }
  return out;
}

}  // namespace soundsieve
