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

#include "soundsieve/energy.hpp"
#include "soundsieve/explainer.hpp"
#include "soundsieve/predictor.hpp"

#include <vector>

namespace soundsieve {

class ClassifierModel;

struct SchedulerConfig {
  /// Local importance above which a predicted segment is sensed out of plan.
  double tau = 0.0;
  /// Longest tolerated run of skipped segments while the buffer is full.
  int t_idle_max = 2;
  int horizon = kHorizon;

  void validate() const;
};

/// Why a plan bit has its current value.
enum class BitSource {
  Global,         // set or left unset by the initial global plan
  LocalOverride,  // sensed because of a prediction or the idle rule
  ForcedSkip,     // cleared because sensing there was infeasible or overtaken
};

struct SamplingPlan {
  SegmentMask mask;
  std::vector<BitSource> source;
  int t_max = 0;
  double tau = 0.0;

  int size() const { return mask.size(); }
  /// First marked index > `after`, or size() when there is none.
  int next_marked(int after) const;
};

/// Largest k <= n with k <= floor(budget + (n - k) / C).
int compute_t_max(int n_segments, const EnergyState& state0);

/// Marks the t_max highest-scoring positions (earlier index wins ties) and
/// repairs the mask so that it replays under `state0`.
SamplingPlan initial_plan(const GlobalImportance& global, int n_segments, const EnergyState& state0);

/// Forward simulation from segment `from` with the budget `state` holds
/// just before it. A marked segment that cannot be sensed is cleared and the
/// highest-scoring unmarked later segment is marked instead.
void repair_plan(SamplingPlan& plan, int from, const EnergyState& state,
                 const GlobalImportance& global);

/// Next segment to sense after `current` (-1 before the clip starts), given
/// `state` just after that sense and predictions for current+1..current+5.
/// Returns plan.size() when nothing more should be sensed.
int adapt(const SamplingPlan& plan, int current, const HorizonScores* predicted,
          const EnergyState& state, const GlobalImportance& global, const SchedulerConfig& cfg);

struct SoundSieveModels {
  const ClassifierModel* classifier = nullptr;
  const PredictorModel* predictor = nullptr;
  const GlobalImportance* global = nullptr;
};

struct SoundSieveRun {
  SimTrace trace;
  SamplingPlan plan;
  int predicted_label = -1;
};

/// Runs one clip through the adaptive sampler, then imputes the gaps and
/// classifies the result.
SoundSieveRun run_soundsieve(const AnalyzedClip& clip, const SoundSieveModels& models,
                             const EnergyState& state0, const SchedulerConfig& cfg);

/// Only the sampling decisions of run_soundsieve (no classification).
SimTrace soundsieve_trace(const AnalyzedClip& clip, const SoundSieveModels& models,
                          const EnergyState& state0, const SchedulerConfig& cfg,
                          SamplingPlan* plan_out = nullptr);

}  // namespace soundsieve
