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

#include "soundsieve/energy.hpp"

#include "soundsieve/model_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace soundsieve {

EnergyState EnergyState::full(int capacity, double charge_ratio) {
  EnergyState s{static_cast<double>(capacity), capacity, charge_ratio};
  s.validate();
  return s;
}

void EnergyState::validate() const {
  if (capacity < 1) {
    throw std::invalid_argument("energy capacity B must be at least 1");
  }
  if (!(charge_ratio > 0.0) || !std::isfinite(charge_ratio)) {
    throw std::invalid_argument("charge ratio C must be positive and finite");
  }
  if (budget < -kBudgetEps || budget > capacity + kBudgetEps) {
    throw std::invalid_argument("budget outside [0, B]");
  }
}

double EnergyState::budget_after_skips(int skips) const {
  const double b = budget + skips * gain_per_skip();
  return b + kBudgetEps >= capacity ? static_cast<double>(capacity) : b;
}

EnergyState step(const EnergyState& state, Action action) {
  EnergyState next = state;
  if (action == Action::Sense) {
    if (!state.can_sense()) {
      throw std::logic_error("sense requested with budget " + format_double(state.budget) +
                             " < 1");
    }
    next.budget = std::max(0.0, state.budget - 1.0);
  } else {
    next.budget = state.budget_after_skips(1);
  }
  return next;
}

double SimTrace::sensed_fraction() const {
  if (mask.size() == 0) {
    return 0.0;
  }
  return static_cast<double>(mask.count()) / mask.size();
}

void record_step(SimTrace& trace, EnergyState& state, Action action) {
  state = step(state, action);
  trace.records.push_back({static_cast<int>(trace.records.size()), action, state.budget});
  trace.mask.bits.push_back(action == Action::Sense);
}

std::optional<std::string> replay_violation(const SimTrace& trace, const EnergyState& initial) {
  if (trace.mask.size() != static_cast<int>(trace.records.size())) {
    return "mask length differs from record count";
  }
  EnergyState s = initial;
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    const TraceRecord& r = trace.records[i];
    const std::string where = "segment " + std::to_string(i) + ": ";
    if (r.index != static_cast<int>(i)) {
      return where + "record index " + std::to_string(r.index) + " out of order";
    }
    if ((r.action == Action::Sense) != trace.mask[static_cast<int>(i)]) {
      return where + "mask disagrees with action";
    }
    if (r.action == Action::Sense && !s.can_sense()) {
      return where + "sense with budget " + format_double(s.budget) + " < 1";
    }
    s = step(s, r.action);
    if (s.budget < -kBudgetEps || s.budget > s.capacity + kBudgetEps) {
      return where + "budget " + format_double(s.budget) + " outside [0, B]";
    }
    if (std::abs(s.budget - r.budget_after) > 1e-9) {
      return where + "recorded budget " + format_double(r.budget_after) + " != replayed " +
             format_double(s.budget);
    }
  }
  return std::nullopt;
}

SimTrace vanilla_sampler(int n_segments, const EnergyState& initial) {
  initial.validate();
  SimTrace trace;
  EnergyState s = initial;
  bool recharging = !s.can_sense();
  for (int i = 0; i < n_segments; ++i) {
    if (recharging && s.is_full()) {
      recharging = false;
    }
    if (!recharging && s.can_sense()) {
      record_step(trace, s, Action::Sense);
      if (!s.can_sense()) {
        recharging = true;
      }
    } else {
      recharging = true;
      record_step(trace, s, Action::Skip);
    }
  }
  return trace;
}

int periodic_period(double charge_ratio) {
  return static_cast<int>(std::ceil(1.0 + charge_ratio - kBudgetEps));
}

SimTrace periodic_sampler(int n_segments, const EnergyState& initial) {
  initial.validate();
  const int p = periodic_period(initial.charge_ratio);
  SimTrace trace;
  EnergyState s = initial;
  for (int i = 0; i < n_segments; ++i) {
    record_step(trace, s, i % p == 0 && s.can_sense() ? Action::Sense : Action::Skip);
  }
  return trace;
}

SimTrace cis1_sampler(int n_segments, const EnergyState& initial) {
  initial.validate();
  constexpr int kBurst = 3;
  if (initial.capacity < kBurst) {
    throw std::invalid_argument("CIS1 needs B >= 3 to sense a 3-segment burst");
  }
  SimTrace trace;
  EnergyState s = initial;
  int in_burst = 0;
  bool recharging = s.budget + kBudgetEps < kBurst;
  for (int i = 0; i < n_segments; ++i) {
    if (recharging && s.is_full()) {
      recharging = false;
    }
    if (!recharging && s.can_sense()) {
      record_step(trace, s, Action::Sense);
      if (++in_burst == kBurst) {
        in_burst = 0;
        recharging = true;
      }
    } else {
      record_step(trace, s, Action::Skip);
    }
  }
  return trace;
}

void write_trace_csv(const std::filesystem::path& path, const SimTrace& trace) {
  std::ofstream os(path);
  if (!os) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  os << "index,action,budget_after\n";
  for (const auto& r : trace.records) {
    os << r.index << ',' << (r.action == Action::Sense ? "sense" : "skip") << ','
       << format_double(r.budget_after) << '\n';
  }
}

}  // namespace soundsieve
