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
#include "soundsieve/explainer.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>

using namespace soundsieve;

TEST_CASE("perturbation masks") {
  SUBCASE("observed fraction is near keep_prob") {
    const auto masks = perturb(20, 256, 0.5, 42);
    REQUIRE(masks.size() == 256);
    double kept = 0.0;
    for (const auto& m : masks) {
      CHECK(m.size() == 20);
      CHECK_FALSE(m.none_set());
      kept += m.count();
    }
    CHECK(std::abs(kept / (256.0 * 20.0) - 0.5) <= 0.05);
  }
  SUBCASE("keep_prob 1 keeps everything") {
    for (const auto& m : perturb(7, 30, 1.0, 1)) {
      CHECK(m.all_set());
    }
  }
  SUBCASE("same seed gives the same masks") {
    CHECK(perturb(12, 40, 0.5, 9) == perturb(12, 40, 0.5, 9));
    CHECK_FALSE(perturb(12, 40, 0.5, 9) == perturb(12, 40, 0.5, 10));
  }
  SUBCASE("invalid arguments") {
    CHECK_THROWS(perturb(0, 4, 0.5, 1));
    CHECK_THROWS(perturb(4, 4, 0.0, 1));
  }
}

TEST_CASE("locality weight") {
  CHECK(locality_weight(SegmentMask::all(10)) == 1.0);
  const SegmentMask half = testing::mask_from("1010101010");
  const double d = 1.0 - std::sqrt(0.5);
  CHECK(locality_weight(half) == doctest::Approx(std::exp(-d * d / 0.0625)).epsilon(1e-14));
  const auto w = locality_weight(testing::mask_from("1000000000"));
  CHECK(w > 0.0);
  CHECK(w < 1.0);
  CHECK_THROWS(locality_weight(SegmentMask::all(4, false)));
}

TEST_CASE("weighted ridge matches the normal-equation oracle") {
  Rng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::MatrixXd x(50, 8);
    Eigen::VectorXd y(50);
    Eigen::VectorXd w(50);
    std::vector<std::vector<double>> xs(50, std::vector<double>(8));
    std::vector<double> ys(50);
    std::vector<double> ws(50);
    for (int r = 0; r < 50; ++r) {
      for (int c = 0; c < 8; ++c) {
        x(r, c) = xs[r][c] = rng.bernoulli(0.5) ? 1.0 : 0.0;
      }
      y(r) = ys[r] = rng.normal();
      w(r) = ws[r] = rng.uniform(0.05, 1.0);
    }
    const RidgeSolution sol = solve_weighted_ridge(x, y, w, 1.0);
    const auto beta = oracle::weighted_ridge(xs, ys, ws, 1.0);
    std::vector<double> got(sol.coefficients.data(), sol.coefficients.data() + 8);
    got.push_back(sol.intercept);
    CHECK(oracle::relative_error(got, beta) < 1e-8);
  }
}

TEST_CASE("ridge rejects a singular unpenalized system") {
  Eigen::MatrixXd x = Eigen::MatrixXd::Ones(6, 2);
  Eigen::VectorXd y = Eigen::VectorXd::Ones(6);
  Eigen::VectorXd w = Eigen::VectorXd::Ones(6);
  CHECK_THROWS(solve_weighted_ridge(x, y, w, 0.0));
  CHECK_THROWS(solve_weighted_ridge(x, y, w, -1.0));
}

TEST_CASE("local explanations of toy scorers") {
  Rng rng(23);
  const AnalyzedClip clip = testing::random_clip(10, 6, rng);
  ExplainerConfig cfg;

  SUBCASE("a constant scorer has no important segment") {
    const auto imp = fit_local(clip, [](const Spectrogram&, const SegmentMask&) { return 0.7; }, cfg, 3);
    for (double s : imp.scores) {
      CHECK(s == 0.0);
    }
  }
  SUBCASE("counting observed segments weighs every segment equally") {
    cfg.lambda = 1e-9;
    const auto count = [](const Spectrogram&, const SegmentMask& m) {
      return static_cast<double>(m.count());
    };
    const auto masks = perturb(10, cfg.n_aug, cfg.keep_prob, 3);
    std::vector<Perturbation> ps;
    for (const auto& m : masks) {
      ps.push_back({m, static_cast<double>(m.count()), 1.0});
    }
    const RidgeSolution raw = fit_surrogate(ps, cfg.lambda);
    for (int i = 0; i < 10; ++i) {
      CHECK(raw.coefficients(i) == doctest::Approx(1.0).epsilon(1e-6));
    }
    const auto imp = fit_local(clip, count, cfg, 3);
    for (double s : imp.scores) {
      CHECK(s == doctest::Approx(1.0).epsilon(1e-6));
    }
  }
  SUBCASE("a scorer rewarding one segment ranks it first") {
    AnalyzedClip five = testing::random_clip(5, 6, rng);
    const auto reward3 = [](const Spectrogram&, const SegmentMask& m) { return m[3] ? 0.9 : 0.1; };
    const auto imp = fit_local(five, reward3, cfg, 4);
    int best = 0;
    for (int i = 1; i < 5; ++i) {
      if (imp.scores[i] > imp.scores[best]) best = i;
    }
    CHECK(best == 3);
    CHECK(imp.scores[3] == 1.0);
  }
  SUBCASE("scaling the scorer leaves normalized scores unchanged") {
    const auto f = [](const Spectrogram& s, const SegmentMask& m) {
      return 0.2 * m[1] + 0.5 * m[6] + 0.01 * s.frames.sum();
    };
    const auto a = fit_local(clip, f, cfg, 5);
    const auto b = fit_local(clip, [&](const Spectrogram& s, const SegmentMask& m) { return 3.5 * f(s, m); }, cfg, 5);
    for (int i = 0; i < 10; ++i) {
      CHECK(b.scores[i] == doctest::Approx(a.scores[i]).epsilon(1e-9));
    }
  }
  SUBCASE("scores are normalized and deterministic") {
    const auto f = [](const Spectrogram& s, const SegmentMask& m) {
      return std::tanh(s.frames.mean()) + 0.3 * m[0] - 0.4 * m[9];
    };
    const auto a = fit_local(clip, f, cfg, 6);
    const auto b = fit_local(clip, f, cfg, 6);
    CHECK(a.scores == b.scores);
    double peak = 0.0;
    for (double s : a.scores) peak = std::max(peak, std::abs(s));
    CHECK(peak == doctest::Approx(1.0));
  }
}

TEST_CASE("global aggregation") {
  SUBCASE("one clip is its own global importance") {
    const GlobalImportance g = aggregate_global({{"a", {0.5, -1.0, 0.25}}});
    CHECK(g.mean_score == std::vector<double>{0.5, -1.0, 0.25});
    CHECK(g.support_count == std::vector<int>{1, 1, 1});
  }
  SUBCASE("opposite scores cancel") {
    const GlobalImportance g = aggregate_global({{"a", {0.5, -1.0}}, {"b", {-0.5, 1.0}}});
    CHECK(g.mean_score == std::vector<double>{0.0, 0.0});
  }
  SUBCASE("mixed lengths average over the clips that reach a position") {
    std::vector<double> a(10, 0.2);
    std::vector<double> b(20, 0.6);
    const GlobalImportance g = aggregate_global({{"a", a}, {"b", b}});
    REQUIRE(g.size() == 20);
    for (int i = 0; i < 10; ++i) {
      CHECK(g.support_count[i] == 2);
      CHECK(g.mean_score[i] == doctest::Approx(0.4));
    }
    for (int i = 10; i < 20; ++i) {
      CHECK(g.support_count[i] == 1);
      CHECK(g.mean_score[i] == doctest::Approx(0.6));
    }
  }
  CHECK_THROWS(aggregate_global({}));
}

TEST_CASE("score percentile") {
  const std::vector<ImportanceVector> imp{{"a", {0.0, 0.1, 0.2, 0.3, 0.4}},
                                          {"b", {0.5, 0.6, 0.7, 0.8, 0.9, 1.0}}};
  const double p = score_percentile(imp, 0.7);
  CHECK(p >= 0.6);
  CHECK(p <= 0.8);
  CHECK(score_percentile(imp, 0.0) == 0.0);
  CHECK(score_percentile(imp, 1.0) == 1.0);
}

TEST_CASE("importance CSV round trip") {
  const std::vector<ImportanceVector> imp{{"tone400/3", {0.1, -0.25, 1.0 / 3.0}}, {"x", {1.0}}};
  const auto path = std::filesystem::temp_directory_path() / "soundsieve_unit_imp.csv";
  write_importance_csv(path, imp);
  const auto back = read_importance_csv(path);
  REQUIRE(back.size() == 2);
  CHECK(back[0].clip_id == "tone400/3");
  CHECK(back[0].scores == imp[0].scores);
  CHECK(back[1].scores == imp[1].scores);
}
