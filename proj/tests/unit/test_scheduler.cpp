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
#include "soundsieve/classifier.hpp"
#include "soundsieve/scheduler.hpp"

#include <doctest.h>

using namespace soundsieve;

namespace {

GlobalImportance scores(std::vector<double> s) {
  GlobalImportance g;
  g.support_count.assign(s.size(), 1);
  g.mean_score = std::move(s);
  return g;
}

GlobalImportance random_scores(int n, Rng& rng) {
  std::vector<double> s;
  for (int i = 0; i < n; ++i) s.push_back(rng.uniform(-0.2, 1.0));
  return scores(s);
}

SamplingPlan plan_with_marks(int n, std::initializer_list<int> marks) {
  SamplingPlan p;
  p.mask = SegmentMask::all(n, false);
  p.source.assign(static_cast<std::size_t>(n), BitSource::Global);
  for (int m : marks) p.mask.bits[static_cast<std::size_t>(m)] = true;
  return p;
}

// Replays a mask from a starting budget; false on a sense below one unit.
bool feasible(const SegmentMask& m, EnergyState s) {
  for (int i = 0; i < m.size(); ++i) {
    if (m[i] && !s.can_sense()) return false;
    s = step(s, m[i] ? Action::Sense : Action::Skip);
  }
  return true;
}

struct Models {
  ClassifierModel classifier = ClassifierModel::initialized(ClassifierArch{}, 3);
  PredictorModel predictor = PredictorModel::initialized(117, 32, 4);
  GlobalImportance global;
};

}  // namespace

TEST_CASE("scheduler config validation") {
  SchedulerConfig c;
  c.tau = 0.5;
  CHECK_NOTHROW(c.validate());
  c.tau = 1.0;
  CHECK_THROWS(c.validate());
  c.tau = -1.0;
  CHECK_THROWS(c.validate());
  c.tau = 0.0;
  c.t_idle_max = -1;
  CHECK_THROWS(c.validate());
}

TEST_CASE("t_max") {
  CHECK(compute_t_max(20, EnergyState::full(5, 1.0)) == 12);
  CHECK(compute_t_max(20, EnergyState::full(5, 0.01)) == 19);
  CHECK(compute_t_max(20, EnergyState::full(25, 3.0)) == 20);
  CHECK(compute_t_max(20, EnergyState{0.0, 5, 1.0}) == 10);
  CHECK(compute_t_max(0, EnergyState::full(5, 1.0)) == 0);
}

TEST_CASE("uniform scores at B = 5, C = 1 on 20 segments") {
  const SamplingPlan p = initial_plan(scores(std::vector<double>(20, 0.3)), 20, EnergyState::full(5, 1.0));
  CHECK(p.t_max == 12);
  CHECK(p.mask.to_string() == "11111010101010101010");
  CHECK(p.mask.count() == 12);
  CHECK(feasible(p.mask, EnergyState::full(5, 1.0)));
  CHECK(p.source[5] == BitSource::ForcedSkip);
}

TEST_CASE("near-continuous power marks all but the recharge gaps") {
  const SamplingPlan p = initial_plan(scores(std::vector<double>(20, 0.3)), 20, EnergyState::full(5, 0.01));
  CHECK(p.t_max == 19);
  CHECK(p.mask.to_string() == "11111011111011111011");
  CHECK(feasible(p.mask, EnergyState::full(5, 0.01)));
}

TEST_CASE("a large buffer marks every segment") {
  const SamplingPlan p = initial_plan(scores(std::vector<double>(20, 0.0)), 20, EnergyState::full(20, 3.0));
  CHECK(p.mask.all_set());
}

TEST_CASE("descending scores never give adjacent marks once the budget runs out") {
  std::vector<double> s;
  for (int i = 0; i < 30; ++i) s.push_back(1.0 - i / 30.0);
  const EnergyState s0 = EnergyState::full(5, 3.0);
  const SamplingPlan p = initial_plan(scores(s), 30, s0);
  CHECK(feasible(p.mask, s0));
  CHECK(p.mask.count() <= p.t_max);
  CHECK(p.mask.to_string().substr(0, 5) == "11111");
  EnergyState st = s0;
  bool exhausted = false;
  for (int i = 0; i + 1 < 30; ++i) {
    if (exhausted) {
      CHECK_FALSE((p.mask[i] && p.mask[i + 1]));
    }
    st = step(st, p.mask[i] ? Action::Sense : Action::Skip);
    exhausted = exhausted || !st.can_sense();
  }
}

TEST_CASE("repaired plans are feasible and within t_max") {
  Rng rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + static_cast<int>(rng.index(40));
    const EnergyState s0{rng.uniform(0.0, 6.0), 6, rng.uniform(0.05, 4.0)};
    const SamplingPlan p = initial_plan(random_scores(n, rng), n, s0);
    CHECK(feasible(p.mask, s0));
    CHECK(p.mask.count() <= p.t_max);
  }
}

TEST_CASE("adapt follows the plan when no prediction clears the threshold") {
  const SamplingPlan p = plan_with_marks(20, {3, 6, 12});
  SchedulerConfig cfg;
  cfg.tau = 0.5;
  const HorizonScores low{0.1, 0.2, 0.5, 0.4, -0.9};
  const EnergyState s{2.0, 5, 1.0};
  CHECK(adapt(p, 3, &low, s, scores(std::vector<double>(20, 0.0)), cfg) == 6);
  CHECK(adapt(p, 3, nullptr, s, scores(std::vector<double>(20, 0.0)), cfg) == 6);
  // Nothing planned after 12 and the buffer is full by 16: the idle rule fires.
  CHECK(adapt(p, 12, &low, s, scores(std::vector<double>(20, 0.0)), cfg) == 16);
  CHECK(adapt(p, 17, &low, s, scores(std::vector<double>(20, 0.0)), cfg) == 20);
}

TEST_CASE("adapt senses early for a confident prediction") {
  const SamplingPlan p = plan_with_marks(20, {2, 9});
  SchedulerConfig cfg;
  cfg.tau = 0.5;
  const HorizonScores pred{0.1, 0.9, 0.0, 0.0, 0.0};
  const EnergyState s{2.0, 5, 1.0};
  CHECK(adapt(p, 2, &pred, s, scores(std::vector<double>(20, 0.0)), cfg) == 4);

  SUBCASE("but not into an infeasible slot") {
    const EnergyState empty{0.0, 5, 3.0};
    CHECK(adapt(p, 2, &pred, empty, scores(std::vector<double>(20, 0.0)), cfg) == 9);
  }
  SUBCASE("and never past the next planned sense") {
    const SamplingPlan near = plan_with_marks(20, {2, 4});
    const HorizonScores late{0.0, 0.0, 0.0, 0.95, 0.0};
    CHECK(adapt(near, 2, &late, s, scores(std::vector<double>(20, 0.0)), cfg) == 4);
  }
}

TEST_CASE("idle rule promotes a sense when the buffer would sit full") {
  std::vector<double> g(20, 0.0);
  g[5] = 0.4;
  const SamplingPlan p = plan_with_marks(20, {4, 10});
  SchedulerConfig cfg;
  cfg.tau = 0.9;
  cfg.t_idle_max = 2;
  const EnergyState full = EnergyState::full(5, 1.0);
  const int next = adapt(p, 4, nullptr, full, scores(g), cfg);
  CHECK(next == 5);
  g[5] = 0.0;
  g[7] = 0.4;
  CHECK(adapt(p, 4, nullptr, full, scores(g), cfg) == 7);
  g[7] = 0.0;
  CHECK(adapt(p, 4, nullptr, full, scores(g), cfg) == 5);
}

TEST_CASE("full scheduler runs") {
  Models m;
  Rng rng(41);
  m.global = random_scores(20, rng);
  const SoundSieveModels models{&m.classifier, &m.predictor, &m.global};
  SchedulerConfig cfg;
  cfg.tau = 0.05;

  SUBCASE("traces are feasible and never idle at full charge") {
    for (int trial = 0; trial < 40; ++trial) {
      const AnalyzedClip clip = testing::random_clip(20, 32, rng);
      const double c = rng.uniform(0.3, 4.0);
      const EnergyState s0 = EnergyState::full(5, c);
      SamplingPlan plan;
      const SimTrace t = soundsieve_trace(clip, models, s0, cfg, &plan);
      REQUIRE(t.mask.size() == 20);
      CHECK_FALSE(replay_violation(t, s0).has_value());
      CHECK(feasible(t.mask, s0));
      EnergyState s = s0;
      int idle = 0;
      for (int i = 0; i < 20; ++i) {
        const bool was_full = s.is_full();
        idle = (!t.mask[i] && was_full) ? idle + 1 : 0;
        CHECK(idle <= cfg.t_idle_max);
        s = step(s, t.mask[i] ? Action::Sense : Action::Skip);
      }
      CHECK(soundsieve_trace(clip, models, s0, cfg).mask == t.mask);
    }
  }
  SUBCASE("more energy never means fewer senses") {
    for (int trial = 0; trial < 20; ++trial) {
      const AnalyzedClip clip = testing::random_clip(20, 32, rng);
      int last = -1;
      for (double c : {4.0, 3.0, 2.0, 1.5, 1.0, 0.5, 0.1}) {
        const int sensed = soundsieve_trace(clip, models, EnergyState::full(5, c), cfg).mask.count();
        CHECK(sensed >= last);
        last = sensed;
      }
    }
  }
  SUBCASE("without a predictor the run is plan plus idle rule") {
    const SoundSieveModels plan_only{&m.classifier, nullptr, &m.global};
    const AnalyzedClip clip = testing::random_clip(20, 32, rng);
    const SimTrace t = soundsieve_trace(clip, plan_only, EnergyState::full(5, 2.0), cfg);
    CHECK(feasible(t.mask, EnergyState::full(5, 2.0)));
  }
  SUBCASE("a buffer as long as the clip senses everything") {
    const AnalyzedClip clip = testing::random_clip(20, 32, rng);
    const SoundSieveRun run = run_soundsieve(clip, models, EnergyState::full(20, 2.0), cfg);
    CHECK(run.trace.mask.all_set());
    CHECK(run.predicted_label == predict(m.classifier, clip.mel));
  }
  SUBCASE("missing models are rejected") {
    const AnalyzedClip clip = testing::random_clip(20, 32, rng);
    CHECK_THROWS(soundsieve_trace(clip, SoundSieveModels{}, EnergyState::full(5, 1.0), cfg));
  }
}
