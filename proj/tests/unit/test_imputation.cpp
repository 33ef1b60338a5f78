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

#include "fixtures.hpp"
#include "oracles.hpp"
#include "soundsieve/imputation.hpp"

#include <doctest.h>

using namespace soundsieve;
using testing::mask_from;

namespace {

struct Case {
  Spectrogram spec;
  SegmentView view;
};

Case random_case(int n_segments, int n_bins, Rng& rng) {
  Case c;
  c.spec = testing::random_spectrogram(n_segments * kFramesPerSegment, n_bins, rng);
  c.view = SegmentView::for_frames(c.spec.n_frames());
  return c;
}

}  // namespace

TEST_CASE("find_gaps reports frame ranges of missing segments") {
  const SegmentView view = SegmentView::for_frames(20);
  const auto gaps = find_gaps(mask_from("01101"), view);
  REQUIRE(gaps.size() == 2);
  CHECK(gaps[0] == GapBounds{0, 3});
  CHECK(gaps[1] == GapBounds{12, 15});
  CHECK(find_gaps(mask_from("11111"), view).empty());
}

TEST_CASE("all-true mask leaves the spectrogram unchanged") {
  Rng rng(1);
  const Case c = random_case(6, 8, rng);
  CHECK(impute(c.spec, SegmentMask::all(6), c.view).frames == c.spec.frames);
}

TEST_CASE("all-missing mask is rejected") {
  Rng rng(1);
  const Case c = random_case(3, 4, rng);
  CHECK_THROWS(impute(c.spec, SegmentMask::all(3, false), c.view));
}

TEST_CASE("equal anchors fill the gap with the same value") {
  Spectrogram s;
  s.frames = Matrix::Constant(16, 3, 7.0);
  s.frames.block(4, 0, 8, 3).setConstant(-100.0);
  const Spectrogram out = impute(s, mask_from("1001"), SegmentView::for_frames(16));
  CHECK((out.frames.array() - 7.0).abs().maxCoeff() < 1e-12);
}

TEST_CASE("interior gap follows the two-ended ratios") {
  Rng rng(2);
  const Case c = random_case(4, 5, rng);
  const Spectrogram out = impute(c.spec, mask_from("1001"), c.view);
  // Gap frames 4..11, anchors 3 and 12: the first pass uses r = 1/9 and 8/9.
  for (int f = 0; f < 5; ++f) {
    const double left = c.spec.frames(3, f);
    const double right = c.spec.frames(12, f);
    CHECK(out.frames(4, f) == doctest::Approx(8.0 / 9.0 * left + 1.0 / 9.0 * right).epsilon(1e-13));
    CHECK(out.frames(11, f) == doctest::Approx(1.0 / 9.0 * left + 8.0 / 9.0 * right).epsilon(1e-13));
  }
}

TEST_CASE("later passes re-anchor on the frames written by the previous pass") {
  // Second pass over frames 5..10 is anchored on the new frames 4 and 11.
  Rng rng(3);
  const Case c = random_case(4, 3, rng);
  const Spectrogram out = impute(c.spec, mask_from("1001"), c.view);
  for (int f = 0; f < 3; ++f) {
    const double a = out.frames(4, f);
    const double b = out.frames(11, f);
    CHECK(out.frames(5, f) == doctest::Approx(6.0 / 7.0 * a + 1.0 / 7.0 * b).epsilon(1e-13));
    CHECK(out.frames(10, f) == doctest::Approx(1.0 / 7.0 * a + 6.0 / 7.0 * b).epsilon(1e-13));
  }
}

TEST_CASE("the final pass of a gap anchors on the previous pass") {
  // Segments of 4, 4 and 3 frames; gap frames 4..7 take two passes.
  Rng rng(8);
  const Spectrogram s = testing::random_spectrogram(11, 2, rng);
  const Spectrogram out = impute(s, mask_from("101"), SegmentView::for_frames(11));
  for (int f = 0; f < 2; ++f) {
    CHECK(out.frames(5, f) ==
          doctest::Approx(2.0 / 3.0 * out.frames(4, f) + 1.0 / 3.0 * out.frames(7, f)).epsilon(1e-13));
    CHECK(out.frames(6, f) ==
          doctest::Approx(1.0 / 3.0 * out.frames(4, f) + 2.0 / 3.0 * out.frames(7, f)).epsilon(1e-13));
  }
}

TEST_CASE("prefix and suffix gaps replicate the nearest observed frame") {
  Rng rng(4);
  const Case c = random_case(5, 6, rng);
  const Spectrogram out = impute(c.spec, mask_from("01100"), c.view);
  for (int t = 0; t < 4; ++t) {
    CHECK(out.frames.row(t) == c.spec.frames.row(4));
  }
  for (int t = 12; t < 20; ++t) {
    CHECK(out.frames.row(t) == c.spec.frames.row(11));
  }
}

TEST_CASE("zero_fill zeroes missing frames only") {
  Rng rng(5);
  const Case c = random_case(4, 3, rng);
  const Spectrogram out = zero_fill(c.spec, mask_from("1010"), c.view);
  CHECK(out.frames.block(0, 0, 4, 3) == c.spec.frames.block(0, 0, 4, 3));
  CHECK(out.frames.block(4, 0, 4, 3).cwiseAbs().maxCoeff() == 0.0);
  CHECK(out.frames.block(12, 0, 4, 3).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("impute agrees with the literal oracle on random masks") {
  Rng rng(6);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng.index(30));
    const Case c = random_case(n, 4, rng);
    const SegmentMask m = testing::random_gap_mask(n, rng);
    const Spectrogram fast = impute(c.spec, m, c.view);
    const Spectrogram slow = oracle::impute(c.spec, m, c.view);
    CHECK((fast.frames - slow.frames).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("imputation properties") {
  Rng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng.index(20));
    const Case c = random_case(n, 5, rng);
    const SegmentMask m = testing::random_gap_mask(n, rng);
    const Spectrogram out = impute(c.spec, m, c.view);

    // Observed frames are preserved bit for bit.
    for (int s = 0; s < n; ++s) {
      if (m[s]) {
        CHECK(out.frames.middleRows(4 * s, 4) == c.spec.frames.middleRows(4 * s, 4));
      }
    }
    // Idempotence.
    CHECK(impute(out, SegmentMask::all(n), c.view).frames == out.frames);
    // Boundedness between the two anchors of each interior gap.
    for (const GapBounds& g : find_gaps(m, c.view)) {
      if (g.t_s == 0 || g.t_e == c.view.n_frames() - 1) {
        continue;
      }
      for (int f = 0; f < 5; ++f) {
        const double lo = std::min(c.spec.frames(g.t_s - 1, f), c.spec.frames(g.t_e + 1, f));
        const double hi = std::max(c.spec.frames(g.t_s - 1, f), c.spec.frames(g.t_e + 1, f));
        for (int t = g.t_s; t <= g.t_e; ++t) {
          CHECK(out.frames(t, f) >= lo - 1e-12);
          CHECK(out.frames(t, f) <= hi + 1e-12);
        }
      }
    }
  }
}

TEST_CASE("segment mask helpers") {
  const SegmentMask m = mask_from("10110");
  CHECK(m.count() == 3);
  CHECK(m.to_string() == "10110");
  CHECK_FALSE(m.all_set());
  CHECK(SegmentMask::all(3, false).none_set());
}
