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

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

namespace soundsieve {

/// Shape of the mel-spectrogram CNN:
///   conv1 1x4 (frequency only) -> ReLU
///   conv2 3x3 -> ReLU -> 2x2 max pool
///   conv3 3x3 -> ReLU -> 2x2 max pool
///   conv4 3x3 -> ReLU -> 2x2 max pool
///   global max pool over time and frequency
///   dense -> ReLU -> dense -> softmax
/// Default widths give conv parameter counts 5, 20, 152, 2336.
struct ClassifierArch {
  int n_classes = 4;
  int n_mel = kDefaultMelBins;
  std::array<int, 4> channels{1, 2, 8, 32};
  int dense_hidden = 256;

  friend bool operator==(const ClassifierArch&, const ClassifierArch&) = default;
};

class ClassifierModel {
public:
  static constexpr int kLayers = 6;

  ClassifierModel() = default;
  explicit ClassifierModel(const ClassifierArch& arch);

  /// He-normal weights, zero biases.
  static ClassifierModel initialized(const ClassifierArch& arch, std::uint64_t seed);

  const ClassifierArch& arch() const { return arch_; }
  int n_classes() const { return arch_.n_classes; }

  std::vector<double>& params() { return params_; }
  const std::vector<double>& params() const { return params_; }

  /// Weight + bias count per layer (conv1..conv4, dense5, dense6).
  std::array<int, kLayers> layer_param_counts() const;
  std::size_t param_count() const { return params_.size(); }

  /// Offset of layer `l`'s weights in params(); its biases follow the weights.
  std::size_t layer_offset(int layer) const { return offsets_[layer]; }

  /// The 1x4 first-layer filter, reused for sampler features, with the input
  /// normalization folded in so that it applies to raw mel frames. Requires
  /// a single conv1 output channel.
  FrequencyFilter first_layer_filter() const;

  /// Fewest frames an input may have and still reach the global pool.
  int min_frames() const;

  /// Inputs enter the network as (mel - shift) / scale. Fixed, not trained.
  double input_shift() const { return input_shift_; }
  double input_scale() const { return input_scale_; }
  void set_input_normalization(double shift, double scale);

private:
  ClassifierArch arch_;
  std::vector<double> params_;
  double input_shift_ = 0.0;
  double input_scale_ = 1.0;
  std::array<std::size_t, kLayers + 1> offsets_{};
};

/// Softmax class probabilities. Throws if the input has too few frames or
/// the wrong number of mel bins.
std::vector<double> forward(const ClassifierModel& model, const Spectrogram& mel);

/// Per-channel outputs of the global max pool.
std::vector<double> global_max_activations(const ClassifierModel& model, const Spectrogram& mel);

int predict(const ClassifierModel& model, const Spectrogram& mel);

/// Probability assigned to `label`; throws std::out_of_range for a bad label.
double true_class_score(const ClassifierModel& model, const Spectrogram& mel, int label);

/// Cross-entropy loss of one example. Adds d(loss)/d(params) into `grad`
/// (which must have param_count() entries).
double loss_and_gradient(const ClassifierModel& model, const Spectrogram& mel, int label,
                         std::vector<double>& grad);

/// Cross-entropy loss only; used by finite-difference checks.
double loss(const ClassifierModel& model, const Spectrogram& mel, int label);

struct TrainConfig {
  int epochs = 40;
  double lr = 0.01;
  double momentum = 0.9;
  int batch = 16;
  /// Probability that a clip is perforated and imputed in a given epoch.
  double augment_prob = 0.5;
  /// Per-segment keep probability for perforation masks.
  double mask_keep_prob = 0.4;
  /// Batch gradients longer than this are rescaled to it; 0 disables.
  double clip_norm = 1.0;
  std::uint64_t seed = 1;
};

struct TrainReport {
  double final_loss = 0.0;
  double train_accuracy = 0.0;
  double validation_accuracy = 0.0;
  int epochs_run = 0;
};

struct ClassifierTraining {
  ClassifierModel model;
  TrainReport report;
};

/// Mini-batch SGD with momentum on cross-entropy. Each epoch every clip is
/// independently perforated with a random mask and imputed with probability
/// cfg.augment_prob. Throws std::runtime_error if the loss becomes NaN.
ClassifierTraining train_classifier(const std::vector<AnalyzedClip>& train,
                                    const std::vector<AnalyzedClip>& validation,
                                    const ClassifierArch& arch, const TrainConfig& cfg);

double accuracy(const ClassifierModel& model, const std::vector<AnalyzedClip>& clips);

void save_classifier(const std::filesystem::path& path, const ClassifierModel& model);
ClassifierModel load_classifier(const std::filesystem::path& path);

}  // namespace soundsieve
