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
#include "soundsieve/imputation.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace soundsieve {

class ClassifierModel;

struct ExplainerConfig {
  int n_aug = 256;
  double keep_prob = 0.5;
  double lambda = 1.0;
  /// Kernel width of the locality weight exp(-(1 - cos)^2 / sigma^2).
  double sigma = 0.25;
};

/// One perturbed copy of a clip, with the classifier's response to it and its
/// locality weight.
struct Perturbation {
  SegmentMask mask;
  double classifier_output = 0.0;
  double weight = 1.0;
};

/// Per-segment local importance, normalized so that max |score| = 1 (or all zero).
struct ImportanceVector {
  std::string clip_id;
  std::vector<double> scores;

  int size() const { return static_cast<int>(scores.size()); }
};

/// Position-wise mean of local importance over a dataset.
struct GlobalImportance {
  std::vector<double> mean_score;
  std::vector<int> support_count;

  int size() const { return static_cast<int>(mean_score.size()); }
  /// Score at `position`, 0 beyond the covered range.
  double at(int position) const;
};

/// `n_aug` random masks, each bit kept with probability `keep_prob`; masks
/// with no observed segment are redrawn.
std::vector<SegmentMask> perturb(int n_segments, int n_aug, double keep_prob, std::uint64_t seed);

/// exp(-(1 - cos_sim)^2 / sigma^2), where cos_sim is the cosine similarity
/// of the mask with the all-ones vector, i.e. sqrt(k / n).
double locality_weight(const SegmentMask& mask, double sigma = 0.25);

/// Solution of the weighted ridge problem with an unpenalized intercept.
struct RidgeSolution {
  Eigen::VectorXd coefficients;
  double intercept = 0.0;
};

/// Solves (X'WX + lambda * P) beta = X'Wy, where X is `features` with an
/// appended column of ones and P is the identity with a zero in the intercept
/// slot. Throws std::runtime_error when the system is singular.
RidgeSolution solve_weighted_ridge(const Eigen::MatrixXd& features, const Eigen::VectorXd& targets,
                                   const Eigen::VectorXd& weights, double lambda);

/// Fits the ridge surrogate to a set of scored perturbations and returns the
/// raw (unnormalized) per-segment coefficients.
RidgeSolution fit_surrogate(const std::vector<Perturbation>& perturbations, double lambda);

/// Divides by max |score|. Vectors whose peak is negligible relative to
/// `reference_scale` become all zero.
std::vector<double> normalize_scores(const std::vector<double>& raw, double reference_scale);

/// Scores a perturbed clip: receives the imputed spectrogram and its mask.
using PerturbationScorer = std::function<double(const Spectrogram& imputed, const SegmentMask& mask)>;

/// Local importance of every segment of `clip` under `scorer`.
ImportanceVector fit_local(const AnalyzedClip& clip, const PerturbationScorer& scorer,
                           const ExplainerConfig& cfg, std::uint64_t seed);

/// Convenience overload: scorer = classifier's probability for the clip's label.
ImportanceVector fit_local(const AnalyzedClip& clip, const ClassifierModel& classifier,
                           const ExplainerConfig& cfg, std::uint64_t seed);

GlobalImportance aggregate_global(const std::vector<ImportanceVector>& importances);

/// Value below which `fraction` of all local scores fall (linear interpolation
/// between order statistics).
double score_percentile(const std::vector<ImportanceVector>& importances, double fraction);

/// CSV with header clip_id,position,score.
void write_importance_csv(const std::filesystem::path& path,
                          const std::vector<ImportanceVector>& importances);
std::vector<ImportanceVector> read_importance_csv(const std::filesystem::path& path);

/// Global importance in the same schema, clip_id = "global".
void write_global_csv(const std::filesystem::path& path, const GlobalImportance& global);

}  // namespace soundsieve
