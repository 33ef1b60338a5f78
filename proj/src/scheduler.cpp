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

#include "soundsieve/scheduler.hpp"

#include "soundsieve/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace soundsieve {

void SchedulerConfig::validate() const {
  if (!(tau > -1.0 && tau < 1.0)) {
    throw std::invalid_argument("scheduler threshold tau must lie in (-1, 1)");
  }
  if (t_idle_max < 0) {
    throw std::invalid_argument("t_idle_max must be non-negative");
  }
  if (horizon < 0 || horizon > kHorizon) {
    throw std::invalid_argument("scheduler horizon must lie in [0, 5]");
  }
}

int SamplingPlan::next_marked(int after) const {
  for (int i = std::max(0, after + 1); i < size(); ++i) {
    if (mask[i]) {
      return i;
    }
  }
  return size();
}

int compute_t_max(int n_segments, const EnergyState& state0) {
  state0.validate();
  for (int k = n_segments; k > 0; --k) {
    const double reachable = state0.budget + (n_segments - k) * state0.gain_per_skip();
    if (k <= std::floor(reachable + kBudgetEps)) {
      return k;
    }
  }
  return 0;
}

namespace {

// Highest global score among unmarked positions in (after, n); earlier wins ties.
int best_unmarked_after(const SamplingPlan& plan, int after, const GlobalImportance& global) {
  int best = -1;
  for (int j = after + 1; j < plan.size(); ++j) {
    if (!plan.mask[j] && (best < 0 || global.at(j) > global.at(best))) {
      best = j;
    }
  }
  return best;
}

void set_bit(SamplingPlan& plan, int i, bool value, BitSource source) {
  plan.mask.bits[static_cast<std::size_t>(i)] = value;
  plan.source[static_cast<std::size_t>(i)] = source;
}

}  // namespace

void repair_plan(SamplingPlan& plan, int from, const EnergyState& state,
                 const GlobalImportance& global) {
  EnergyState s = state;
  for (int i = std::max(0, from); i < plan.size(); ++i) {
    if (plan.mask[i] && s.can_sense()) {
      s = step(s, Action::Sense);
      continue;
    }
    if (plan.mask[i]) {
      set_bit(plan, i, false, BitSource::ForcedSkip);
      const int j = best_unmarked_after(plan, i, global);
      if (j >= 0) {
        set_bit(plan, j, true, BitSource::Global);
      }
    }
    s = step(s, Action::Skip);
  }
}

SamplingPlan initial_plan(const GlobalImportance& global, int n_segments,
                          const EnergyState& state0) {
  if (n_segments < 0) {
    throw std::invalid_argument("negative segment count");
  }
  SamplingPlan plan;
  plan.mask = SegmentMask::all(n_segments, false);
  plan.source.assign(static_cast<std::size_t>(n_segments), BitSource::Global);
  plan.t_max = compute_t_max(n_segments, state0);

  std::vector<int> order(static_cast<std::size_t>(n_segments));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return global.at(a) > global.at(b); });
  for (int r = 0; r < plan.t_max; ++r) {
    plan.mask.bits[static_cast<std::size_t>(order[static_cast<std::size_t>(r)])] = true;
  }
  repair_plan(plan, 0, state0, global);
  return plan;
}

int adapt(const SamplingPlan& plan, int current, const HorizonScores* predicted,
          const EnergyState& state, const GlobalImportance& global, const SchedulerConfig& cfg) {
  const int n = plan.size();
  if (current + 1 >= n) {
    return n;
  }
  const auto feasible = [&](int j) {
    return state.budget_after_skips(j - current - 1) + kBudgetEps >= 1.0;
  };

  const int planned = plan.next_marked(current);
  // A prediction can only bring a sense forward; a planned sense that comes
  // first is kept and the predictions are refreshed after it.
  if (predicted != nullptr) {
    for (int h = 0; h < cfg.horizon; ++h) {
      const int j = current + 1 + h;
      if (j >= planned) {
        break;
      }
      const double p = (*predicted)[static_cast<std::size_t>(h)];
      if (p > cfg.tau && p >= 0.0 && feasible(j)) {
        return j;
      }
    }
  }

  int full_at = -1;
  for (int k = current + 1; k < n; ++k) {
    if (state.budget_after_skips(k - current - 1) + kBudgetEps >= state.capacity) {
      full_at = k;
      break;
    }
  }
  if (full_at >= 0 && planned - full_at > cfg.t_idle_max) {
    const int last = std::min(n - 1, full_at + cfg.t_idle_max);
    int best = full_at;
    for (int j = full_at + 1; j <= last; ++j) {
      if (global.at(j) > global.at(best)) {
        best = j;
      }
    }
    return best;
  }
  return planned;
}

SimTrace soundsieve_trace(const AnalyzedClip& clip, const SoundSieveModels& models,
                          const EnergyState& state0, const SchedulerConfig& cfg,
                          SamplingPlan* plan_out) {
  if (models.global == nullptr || models.classifier == nullptr) {
    throw std::invalid_argument("soundsieve needs global importance and a classifier");
  }
  cfg.validate();
  state0.validate();
  const GlobalImportance& global = *models.global;
  const int n = clip.n_segments();
  const int n_mel = clip.mel.n_bins();
  const FrequencyFilter filter = models.classifier->first_layer_filter();

  SamplingPlan plan = initial_plan(global, n, state0);
  plan.tau = cfg.tau;
  SimTrace trace;
  EnergyState s = state0;

  const auto skip_until = [&](int stop) {
    for (int i = static_cast<int>(trace.records.size()); i < stop; ++i) {
      if (plan.mask[i]) {
        set_bit(plan, i, false, BitSource::ForcedSkip);
      }
      record_step(trace, s, Action::Skip);
    }
  };

  int next = adapt(plan, -1, nullptr, s, global, cfg);
  while (next < n) {
    skip_until(next);
    if (!s.can_sense()) {
      throw std::logic_error("clip '" + clip.clip_id + "': scheduler chose infeasible segment " +
                             std::to_string(next));
    }
    record_step(trace, s, Action::Sense);
    if (!plan.mask[next]) {
      set_bit(plan, next, true, BitSource::LocalOverride);
    }
    const int current = next;
    if (current + 1 >= n) {
      break;
    }
    repair_plan(plan, current + 1, s, global);
    if (models.predictor != nullptr) {
      const auto input = predictor_input(segment_feature(clip.mel, clip.view, current, filter),
                                         n_mel, current, n);
      const HorizonScores predicted = predict_next(*models.predictor, input);
      next = adapt(plan, current, &predicted, s, global, cfg);
    } else {
      next = adapt(plan, current, nullptr, s, global, cfg);
    }
  }
  skip_until(n);
  if (plan_out != nullptr) {
    *plan_out = std::move(plan);
  }
  return trace;
}

SoundSieveRun run_soundsieve(const AnalyzedClip& clip, const SoundSieveModels& models,
                             const EnergyState& state0, const SchedulerConfig& cfg) {
  SoundSieveRun run;
  run.trace = soundsieve_trace(clip, models, state0, cfg, &run.plan);
  const Spectrogram filled = run.trace.mask.none_set()
                                 ? zero_fill(clip.mel, run.trace.mask, clip.view)
                                 : impute(clip.mel, run.trace.mask, clip.view);
  run.predicted_label = predict(*models.classifier, filled);
  return run;
}

}  // namespace soundsieve
