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
#include "soundsieve/explainer.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace soundsieve {

/// Number of upcoming segments whose importance is predicted.
inline constexpr int kHorizon = 5;

using HorizonScores = std::array<double, kHorizon>;

/// Predictor input: the segment's 1x4 feature vector zero-padded to a full
/// four-frame segment, followed by the normalized position i / n_segments.
std::vector<double> predictor_input(const FeatureVector& features, int n_mel, int segment,
                                    int n_segments);

/// Length of predictor_input() for a given mel resolution.
int predictor_input_dim(int n_mel);

struct PredictorExample {
  std::vector<double> input;
  HorizonScores target{};
  std::string clip_id;
  int segment = 0;
};

struct PredictorDataset {
  int input_dim = 0;
  std::vector<PredictorExample> examples;
  /// Clips with fewer than kHorizon + 1 segments, which contribute nothing.
  std::vector<std::string> skipped;
};

/// For an m-segment clip emits (segment i, scores i+1..i+5) for every
/// i in [0, m - 6]. `importances[k]` must describe `clips[k]`.
PredictorDataset build_dataset(const std::vector<AnalyzedClip>& clips,
                               const std::vector<ImportanceVector>& importances,
                               const FrequencyFilter& filter);

/// input -> (standardize) -> dense(hidden) -> ReLU -> dense(kHorizon).
class PredictorModel {
public:
  PredictorModel() = default;
  PredictorModel(int input_dim, int hidden);

  static PredictorModel initialized(int input_dim, int hidden, std::uint64_t seed);

  int input_dim() const { return input_dim_; }
  int hidden() const { return hidden_; }

  /// Trainable weights: W1 [hidden x input], b1, W2 [kHorizon x hidden], b2.
  std::vector<double>& weights() { return weights_; }
  const std::vector<double>& weights() const { return weights_; }

  /// Fixed per-input standardization, estimated from the training set.
  std::vector<double>& input_mean() { return mean_; }
  std::vector<double>& input_scale() { return scale_; }
  const std::vector<double>& input_mean() const { return mean_; }
  const std::vector<double>& input_scale() const { return scale_; }

  double final_train_loss = 0.0;

  /// Unclamped network output.
  HorizonScores raw_output(const std::vector<double>& input) const;

private:
  int input_dim_ = 0;
  int hidden_ = 0;
  std::vector<double> weights_;
  std::vector<double> mean_;
  std::vector<double> scale_;
};

struct PredictorTrainConfig {
  int epochs = 50;
  double lr = 0.01;
  int batch = 32;
  int hidden = 32;
  std::uint64_t seed = 1;
};

/// Mini-batch SGD on mean squared error. Throws on an empty dataset or a
/// non-finite loss.
PredictorModel train_predictor(const PredictorDataset& ds, const PredictorTrainConfig& cfg);

/// Mean squared error over the examples; adds d(loss)/d(weights) into `grad`
/// when it is non-null.
double predictor_loss(const PredictorModel& model, const std::vector<PredictorExample>& batch,
                      std::vector<double>* grad);

/// Forward pass clamped to [-1, 1]. Throws on an input-length mismatch.
HorizonScores predict_next(const PredictorModel& model, const std::vector<double>& input);

void save_predictor(const std::filesystem::path& path, const PredictorModel& model);
PredictorModel load_predictor(const std::filesystem::path& path);

}  // namespace soundsieve
