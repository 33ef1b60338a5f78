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
#include "soundsieve/energy.hpp"

#include <doctest.h>

#include <string>

using namespace soundsieve;

namespace {

std::string pattern(const SimTrace& t) { return t.mask.to_string(); }

// Independent replay: plain arithmetic, no library stepping.
bool replays_cleanly(const SimTrace& t, double budget, int capacity, double c) {
  for (int i = 0; i < t.mask.size(); ++i) {
    if (t.mask[i]) {
      if (budget < 1.0 - 1e-9) return false;
      budget -= 1.0;
    } else {
      budget = std::min<double>(capacity, budget + 1.0 / c);
    }
    if (budget < -1e-9 || budget > capacity + 1e-9) return false;
    if (std::abs(budget - t.records[static_cast<std::size_t>(i)].budget_after) > 1e-9) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("step arithmetic") {
  EnergyState s{2.0, 5, 1.0};
  CHECK(step(s, Action::Skip).budget == 3.0);
  CHECK(step(s, Action::Sense).budget == 1.0);
  const EnergyState full = EnergyState::full(5, 2.0);
  CHECK(step(full, Action::Skip).budget == 5.0);
  EnergyState empty{0.0, 5, 3.0};
  for (int i = 0; i < 4; ++i) empty = step(empty, Action::Skip);
  CHECK(empty.budget == doctest::Approx(4.0 / 3.0));
  CHECK_THROWS(step(EnergyState{0.5, 5, 1.0}, Action::Sense));
  CHECK_THROWS(EnergyState::full(0, 1.0));
  CHECK_THROWS(EnergyState::full(5, 0.0));
}

TEST_CASE("three skips at C = 3 reach exactly one unit") {
  EnergyState s{0.0, 5, 3.0};
  for (int i = 0; i < 3; ++i) s = step(s, Action::Skip);
  CHECK(s.can_sense());
}

TEST_CASE("vanilla sampler") {
  CHECK(pattern(vanilla_sampler(16, EnergyState::full(4, 1.0))) == "1111000011110000");
  CHECK(vanilla_sampler(12, EnergyState::full(20, 3.0)).mask.all_set());
  // B = 5 on 40 segments: edge effects of the full start.
  CHECK(vanilla_sampler(40, EnergyState::full(5, 1.0)).mask.count() == 20);
  CHECK(vanilla_sampler(40, EnergyState::full(5, 1.5)).mask.count() == 16);
  CHECK(vanilla_sampler(40, EnergyState::full(5, 2.0)).mask.count() == 15);
  CHECK(vanilla_sampler(40, EnergyState::full(5, 3.0)).mask.count() == 10);
}

TEST_CASE("vanilla duty cycle converges to 1/(1+C)") {
  for (double c : {1.0, 1.5, 2.0, 3.0}) {
    const SimTrace t = vanilla_sampler(4000, EnergyState::full(5, c));
    CHECK(std::abs(t.sensed_fraction() - 1.0 / (1.0 + c)) <= 0.02);
  }
}

TEST_CASE("periodic sampler") {
  CHECK(periodic_period(1.0) == 2);
  CHECK(periodic_period(1.5) == 3);
  CHECK(periodic_period(3.0) == 4);
  CHECK(pattern(periodic_sampler(8, EnergyState::full(5, 1.0))) == "10101010");
  CHECK(pattern(periodic_sampler(8, EnergyState::full(5, 3.0))) == "10001000");
  // Starting empty forces skips until one unit is back.
  const SimTrace t = periodic_sampler(6, EnergyState{0.0, 5, 1.0});
  CHECK(pattern(t) == "001010");
}

TEST_CASE("cis1 sampler") {
  CHECK(pattern(cis1_sampler(12, EnergyState::full(3, 1.0))) == "111000111000");
  CHECK(pattern(cis1_sampler(18, EnergyState::full(3, 2.0))) == "111000000111000000");
  CHECK(cis1_sampler(3, EnergyState::full(3, 5.0)).mask.all_set());
  CHECK_THROWS(cis1_sampler(10, EnergyState::full(2, 1.0)));
}

TEST_CASE("every sampler keeps the budget in range on random settings") {
  Rng rng(12);
  for (int trial = 0; trial < 300; ++trial) {
    const int capacity = 3 + static_cast<int>(rng.index(8));
    const double c = rng.uniform(0.05, 5.0);
    const double b0 = rng.uniform(0.0, capacity);
    const EnergyState s0{b0, capacity, c};
    const int n = 1 + static_cast<int>(rng.index(60));
    for (const SimTrace& t : {vanilla_sampler(n, s0), periodic_sampler(n, s0), cis1_sampler(n, s0)}) {
      CHECK(t.mask.size() == n);
      CHECK(replays_cleanly(t, b0, capacity, c));
      CHECK_FALSE(replay_violation(t, s0).has_value());
    }
    CHECK(pattern(vanilla_sampler(n, s0)) == pattern(vanilla_sampler(n, s0)));
  }
}

TEST_CASE("replay catches tampered traces") {
  SimTrace t = vanilla_sampler(10, EnergyState::full(2, 1.0));
  t.mask.bits[2] = true;
  t.records[2].action = Action::Sense;
  CHECK(replay_violation(t, EnergyState::full(2, 1.0)).has_value());
}
