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

#include "soundsieve/classifier.hpp"
#include "soundsieve/dataset.hpp"
#include "soundsieve/energy.hpp"
#include "soundsieve/explainer.hpp"
#include "soundsieve/predictor.hpp"
#include "soundsieve/report.hpp"
#include "soundsieve/scheduler.hpp"
#include "soundsieve/synthetic.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace soundsieve {

inline const std::vector<std::string> kBaselineSamplers{"vanilla", "periodic", "cis1"};

/// Pipeline stages that draw randomness; each gets its own derived seed.
enum class Stage : std::uint64_t {
  Synth = 1,
  Split,
  Classifier,
  PlainClassifier,
  ExplainTrain,
  ExplainTest,
  Predictor,
  Study,
};

struct ExperimentConfig {
  std::string dataset = "synthetic";
  /// When set, clips come from `<data_dir>/<class>/*.wav` instead of the
  /// synthetic generator.
  std::optional<std::filesystem::path> data_dir;
  SyntheticSpec synth;
  double test_fraction = 0.2;
  ClassifierArch arch;
  TrainConfig classifier;
  ExplainerConfig explainer;
  PredictorTrainConfig predictor;
  double tau_percentile = 0.7;
  int t_idle_max = 2;
  int capacity = 5;
  std::vector<double> charge_ratios{1.0, 1.5, 2.0, 3.0};
  /// Fraction of segments removed in the imputation-vs-zero-fill study.
  double study_missing_fraction = 0.75;
  /// Fractions K for the "sense only the top K% segments" study.
  std::vector<double> k_fractions{0.1, 0.2, 0.3, 0.5, 1.0};
  std::uint64_t seed = 0;

  std::uint64_t stage_seed(Stage stage) const;
};

/// Synthetic corpus or WAV directory, analyzed and split.
Corpus load_corpus(const ExperimentConfig& cfg);

ClassifierTraining train_stage(const Corpus& corpus, const ExperimentConfig& cfg,
                               bool augment = true);

/// Local importance of every clip, explained with its true label.
std::vector<ImportanceVector> explain_clips(const std::vector<AnalyzedClip>& clips,
                                            const ClassifierModel& classifier,
                                            const ExplainerConfig& cfg, std::uint64_t seed);

/// Fraction of the omniscient plan (initial_plan on the clip's own true
/// importance) that the trace sensed. nullopt when that plan is empty.
std::optional<double> informative_recall(const SimTrace& trace,
                                         const ImportanceVector& true_importance,
                                         const EnergyState& state0);

/// vanilla, periodic or cis1.
SimTrace run_baseline(const std::string& sampler, int n_segments, const EnergyState& state0);

/// Spearman correlation with average ranks for ties; nullopt when either
/// side is constant.
std::optional<double> rank_correlation(const std::vector<double>& a, const std::vector<double>& b);

/// Mean rank correlation between predicted and true next-5 importance over
/// every valid position of every clip.
double predictor_rank_correlation(const PredictorModel& predictor, const FrequencyFilter& filter,
                                  const std::vector<AnalyzedClip>& clips,
                                  const std::vector<ImportanceVector>& importances);

struct LabeledTrace {
  std::string sampler;
  double C = 0.0;
  int capacity = 0;
  std::string clip_id;
  SimTrace trace;
};

/// CSV: sampler,C,B,clip_id,index,action,budget_after
void write_traces_csv(const std::filesystem::path& path, const std::vector<LabeledTrace>& traces);
std::vector<LabeledTrace> read_traces_csv(const std::filesystem::path& path);

struct TrainedModels {
  ClassifierModel classifier;
  TrainReport classifier_report;
  std::vector<ImportanceVector> train_importance;
  GlobalImportance global;
  double tau = 0.0;
  PredictorModel predictor;
};

/// Explains the training split, aggregates global importance and the
/// threshold, and trains the predictor.
TrainedModels fit_scheduler_models(const Corpus& corpus, ClassifierTraining classifier,
                                   const ExperimentConfig& cfg);

struct SimulationOutput {
  std::vector<ResultRow> rows;
  std::vector<LabeledTrace> traces;
};

/// Every sampler at every C on the test split, plus the clean row.
/// `test_importance[k]` is the true importance of `test[k]`.
SimulationOutput simulate(const std::vector<AnalyzedClip>& test,
                          const std::vector<ImportanceVector>& test_importance,
                          const ClassifierModel& classifier, const PredictorModel& predictor,
                          const GlobalImportance& global, double tau, const std::string& dataset,
                          const ExperimentConfig& cfg);

struct ImputationStudy {
  double missing_fraction = 0.0;
  /// Augmented classifier on imputed clips.
  double imputed_accuracy = 0.0;
  /// Classifier trained without augmentation on zero-filled clips.
  double zero_fill_accuracy = 0.0;
};

/// Random masks keeping round((1 - missing) * n) segments of each clip.
ImputationStudy imputation_study(const std::vector<AnalyzedClip>& test,
                                 const ClassifierModel& augmented,
                                 const ClassifierModel& plain, double missing_fraction,
                                 std::uint64_t seed);

struct TopKPoint {
  double fraction = 0.0;
  double accuracy = 0.0;
};

/// Accuracy when only the ceil(K * n) segments with the highest true
/// importance are kept (then imputed).
std::vector<TopKPoint> top_k_study(const std::vector<AnalyzedClip>& test,
                                   const std::vector<ImportanceVector>& test_importance,
                                   const ClassifierModel& classifier,
                                   const std::vector<double>& fractions);

struct ExperimentResult {
  std::vector<ResultRow> rows;
  std::vector<LabeledTrace> traces;
  TrainedModels models;
  std::vector<ImportanceVector> test_importance;
  ImputationStudy study;
  std::vector<TopKPoint> top_k;
  double predictor_rank_corr = 0.0;
  double elapsed_seconds = 0.0;
};

/// Full pipeline: corpus, classifier, explanations, predictor, simulation,
/// and the side studies. Deterministic for a given config.
ExperimentResult run_experiment(const ExperimentConfig& cfg, std::ostream* log = nullptr);

/// Everything except the report rows and traces, as JSON.
void write_summary_json(const std::filesystem::path& path, const ExperimentConfig& cfg,
                        const ExperimentResult& result);

/// Everything `all` writes: report.csv, traces.csv, summary.json, the two
/// model files and the importance CSVs.
void write_outputs(const std::filesystem::path& dir, const ExperimentConfig& cfg,
                   const ExperimentResult& result);

}  // namespace soundsieve
