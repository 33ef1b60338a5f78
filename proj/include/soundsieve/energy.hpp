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

#include "soundsieve/imputation.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace soundsieve {

/// Comparisons against the budget tolerate this much floating-point drift,
/// so that three skips at C = 3 recover exactly one unit.
inline constexpr double kBudgetEps = 1e-9;

/// Discrete intermittence model: `budget` counts segments that can be sensed
/// without recharge, capped at `capacity` (B). Sensing costs 1; skipping a
/// segment recharges 1 / `charge_ratio` (C).
struct EnergyState {
  double budget = 5.0;
  int capacity = 5;
  double charge_ratio = 1.0;

  /// Starts with a full buffer.
  static EnergyState full(int capacity, double charge_ratio);

  bool can_sense() const { return budget + kBudgetEps >= 1.0; }
  bool is_full() const { return budget + kBudgetEps >= capacity; }
  double gain_per_skip() const { return 1.0 / charge_ratio; }

  /// Budget after `skips` consecutive skips, with the cap applied.
  double budget_after_skips(int skips) const;

  void validate() const;
};

enum class Action { Sense, Skip };

/// sense: budget - 1 (requires budget >= 1); skip: budget + 1/C, capped at B.
/// Throws std::logic_error when sensing without budget.
EnergyState step(const EnergyState& state, Action action);

struct TraceRecord {
  int index = 0;
  Action action = Action::Skip;
  double budget_after = 0.0;
};

struct SimTrace {
  std::vector<TraceRecord> records;
  SegmentMask mask;

  double sensed_fraction() const;
};

/// Appends one step to `trace`, applying it to `state`.
void record_step(SimTrace& trace, EnergyState& state, Action action);

/// Re-simulates the trace from `initial` and returns a description of the
/// first inconsistency (sense without budget, budget outside [0, B], a
/// recorded budget that does not match, mask disagreement), or nullopt.
std::optional<std::string> replay_violation(const SimTrace& trace, const EnergyState& initial);

/// Sense while the budget allows, then sleep until the buffer is full again.
SimTrace vanilla_sampler(int n_segments, const EnergyState& initial);

/// Sense every p-th segment with p = ceil(1 + C), when the budget allows.
int periodic_period(double charge_ratio);
SimTrace periodic_sampler(int n_segments, const EnergyState& initial);

/// Bursts of three senses, then sleep until full. Requires B >= 3.
SimTrace cis1_sampler(int n_segments, const EnergyState& initial);

/// CSV: index,action,budget_after
void write_trace_csv(const std::filesystem::path& path, const SimTrace& trace);

}  // namespace soundsieve
