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

#include "soundsieve/experiment.hpp"

#include "soundsieve/model_io.hpp"
#include "soundsieve/random.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace soundsieve {

namespace {

void note(std::ostream* log, const std::string& msg) {
  if (log != nullptr) {
    *log << msg << std::endl;
  }
}

Spectrogram fill_gaps(const AnalyzedClip& clip, const SegmentMask& mask) {
  return mask.none_set() ? zero_fill(clip.mel, mask, clip.view) : impute(clip.mel, mask, clip.view);
}

}  // namespace

std::uint64_t ExperimentConfig::stage_seed(Stage stage) const {
  return Rng::mix(seed, static_cast<std::uint64_t>(stage));
}

Corpus load_corpus(const ExperimentConfig& cfg) {
  LabeledAudio audio;
  if (cfg.data_dir) {
    audio = load_wav_directory(*cfg.data_dir);
  } else {
    SyntheticSpec spec = cfg.synth;
    spec.seed = cfg.stage_seed(Stage::Synth);
    audio.class_names = synthetic_class_names(spec);
    audio.clips = gen_synthetic(spec);
  }
  return build_corpus(cfg.dataset, audio, cfg.test_fraction, cfg.stage_seed(Stage::Split));
}

ClassifierTraining train_stage(const Corpus& corpus, const ExperimentConfig& cfg, bool augment) {
  ClassifierArch arch = cfg.arch;
  arch.n_classes = static_cast<int>(corpus.class_names.size());
  TrainConfig tc = cfg.classifier;
  tc.seed = cfg.stage_seed(augment ? Stage::Classifier : Stage::PlainClassifier);
  if (!augment) {
    tc.augment_prob = 0.0;
  }
  return train_classifier(corpus.train, corpus.test, arch, tc);
}

std::vector<ImportanceVector> explain_clips(const std::vector<AnalyzedClip>& clips,
                                            const ClassifierModel& classifier,
                                            const ExplainerConfig& cfg, std::uint64_t seed) {
  std::vector<ImportanceVector> out;
  out.reserve(clips.size());
  for (std::size_t k = 0; k < clips.size(); ++k) {
    try {
      out.push_back(fit_local(clips[k], classifier, cfg, Rng::mix(seed, k)));
    } catch (const std::exception& e) {
      throw std::runtime_error("explaining clip '" + clips[k].clip_id + "': " + e.what());
    }
  }
  return out;
}

std::optional<double> informative_recall(const SimTrace& trace,
                                         const ImportanceVector& true_importance,
                                         const EnergyState& state0) {
  const int n = true_importance.size();
  if (trace.mask.size() != n) {
    throw std::invalid_argument("trace and importance of clip '" + true_importance.clip_id +
                                "' differ in length");
  }
  GlobalImportance own;
  own.mean_score = true_importance.scores;
  own.support_count.assign(true_importance.scores.size(), 1);
  const SamplingPlan optimal = initial_plan(own, n, state0);
  int positives = 0;
  int hits = 0;
  for (int i = 0; i < n; ++i) {
    if (optimal.mask[i]) {
      ++positives;
      hits += trace.mask[i] ? 1 : 0;
    }
  }
  if (positives == 0) {
    return std::nullopt;
  }
  return static_cast<double>(hits) / positives;
}

SimTrace run_baseline(const std::string& sampler, int n_segments, const EnergyState& state0) {
  if (sampler == "vanilla") {
    return vanilla_sampler(n_segments, state0);
  }
  if (sampler == "periodic") {
    return periodic_sampler(n_segments, state0);
  }
  if (sampler == "cis1") {
    return cis1_sampler(n_segments, state0);
  }
  throw std::invalid_argument("unknown sampler '" + sampler + "'");
}

namespace {

std::vector<double> average_ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) {
      ++j;
    }
    const double r = 0.5 * static_cast<double>(i + j);
    for (std::size_t k = i; k <= j; ++k) {
      ranks[idx[k]] = r;
    }
    i = j + 1;
  }
  return ranks;
}

}  // namespace

std::optional<double> rank_correlation(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2) {
    throw std::invalid_argument("rank correlation needs two equal-length vectors of size >= 2");
  }
  const auto ra = average_ranks(a);
  const auto rb = average_ranks(b);
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
  const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    sab += (ra[i] - ma) * (rb[i] - mb);
    saa += (ra[i] - ma) * (ra[i] - ma);
    sbb += (rb[i] - mb) * (rb[i] - mb);
  }
  if (saa <= 0.0 || sbb <= 0.0) {
    return std::nullopt;
  }
  return sab / std::sqrt(saa * sbb);
}

double predictor_rank_correlation(const PredictorModel& predictor, const FrequencyFilter& filter,
                                  const std::vector<AnalyzedClip>& clips,
                                  const std::vector<ImportanceVector>& importances) {
  const PredictorDataset ds = build_dataset(clips, importances, filter);
  double total = 0.0;
  int count = 0;
  for (const auto& ex : ds.examples) {
    const HorizonScores p = predict_next(predictor, ex.input);
    const auto r = rank_correlation({p.begin(), p.end()}, {ex.target.begin(), ex.target.end()});
    if (r) {
      total += *r;
      ++count;
    }
  }
  return count > 0 ? total / count : 0.0;
}

void write_traces_csv(const std::filesystem::path& path, const std::vector<LabeledTrace>& traces) {
  std::ofstream os(path, std::ios::binary);
  if (!os) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  os << "sampler,C,B,clip_id,index,action,budget_after\n";
  for (const auto& t : traces) {
    const std::string prefix =
        t.sampler + ',' + format_double(t.C) + ',' + std::to_string(t.capacity) + ',' + t.clip_id + ',';
    for (const auto& r : t.trace.records) {
      os << prefix << r.index << ',' << (r.action == Action::Sense ? "sense" : "skip") << ','
         << format_double(r.budget_after) << '\n';
    }
  }
}

std::vector<LabeledTrace> read_traces_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) {
    throw std::runtime_error("cannot open " + path.string());
  }
  std::string line;
  if (!std::getline(is, line) || line != "sampler,C,B,clip_id,index,action,budget_after") {
    throw std::runtime_error(path.string() + ": unexpected trace header");
  }
  std::vector<LabeledTrace> out;
  int line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    std::vector<std::string> f;
    std::istringstream ls(line);
    for (std::string field; std::getline(ls, field, ',');) {
      f.push_back(field);
    }
    if (f.size() != 7 || (f[5] != "sense" && f[5] != "skip")) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": malformed row");
    }
    const double c = std::stod(f[1]);
    const int b = std::stoi(f[2]);
    const int index = std::stoi(f[4]);
    if (index == 0 || out.empty() || out.back().clip_id != f[3] || out.back().sampler != f[0] ||
        out.back().C != c) {
      out.push_back({f[0], c, b, f[3], {}});
    }
    const Action a = f[5] == "sense" ? Action::Sense : Action::Skip;
    out.back().trace.records.push_back({index, a, std::stod(f[6])});
    out.back().trace.mask.bits.push_back(a == Action::Sense);
  }
  return out;
}

TrainedModels fit_scheduler_models(const Corpus& corpus, ClassifierTraining classifier,
                                   const ExperimentConfig& cfg) {
  TrainedModels m;
  m.classifier = std::move(classifier.model);
  m.classifier_report = classifier.report;
  m.train_importance =
      explain_clips(corpus.train, m.classifier, cfg.explainer, cfg.stage_seed(Stage::ExplainTrain));
  m.global = aggregate_global(m.train_importance);
  m.tau = score_percentile(m.train_importance, cfg.tau_percentile);
  const PredictorDataset ds =
      build_dataset(corpus.train, m.train_importance, m.classifier.first_layer_filter());
  PredictorTrainConfig pc = cfg.predictor;
  pc.seed = cfg.stage_seed(Stage::Predictor);
  m.predictor = train_predictor(ds, pc);
  return m;
}

SimulationOutput simulate(const std::vector<AnalyzedClip>& test,
                          const std::vector<ImportanceVector>& test_importance,
                          const ClassifierModel& classifier, const PredictorModel& predictor,
                          const GlobalImportance& global, double tau, const std::string& dataset,
                          const ExperimentConfig& cfg) {
  if (test.size() != test_importance.size()) {
    throw std::invalid_argument("simulate: test clips and importances differ in count");
  }
  if (test.empty()) {
    throw std::invalid_argument("simulate: empty test split");
  }
  SimulationOutput out;
  const auto n_clips = static_cast<int>(test.size());

  int clean_correct = 0;
  for (const auto& clip : test) {
    clean_correct += predict(classifier, clip.mel) == clip.label.value() ? 1 : 0;
  }
  out.rows.push_back({dataset, "clean", 0.0, static_cast<double>(clean_correct) / n_clips, 1.0,
                      1.0, n_clips, cfg.seed});

  SchedulerConfig sc;
  sc.tau = tau;
  sc.t_idle_max = cfg.t_idle_max;
  const SoundSieveModels models{&classifier, &predictor, &global};

  std::vector<std::string> samplers = kBaselineSamplers;
  samplers.emplace_back("soundsieve");
  for (double c : cfg.charge_ratios) {
    const EnergyState state0 = EnergyState::full(cfg.capacity, c);
    for (const auto& sampler : samplers) {
      int correct = 0;
      double recall_sum = 0.0;
      int recall_count = 0;
      double sensed_sum = 0.0;
      for (std::size_t k = 0; k < test.size(); ++k) {
        const AnalyzedClip& clip = test[k];
        SimTrace trace;
        int label = -1;
        try {
          if (sampler == "soundsieve") {
            SoundSieveRun run = run_soundsieve(clip, models, state0, sc);
            trace = std::move(run.trace);
            label = run.predicted_label;
          } else {
            trace = run_baseline(sampler, clip.n_segments(), state0);
            label = predict(classifier, fill_gaps(clip, trace.mask));
          }
          if (auto bad = replay_violation(trace, state0)) {
            throw std::logic_error("energy violation: " + *bad);
          }
        } catch (const std::exception& e) {
          throw std::runtime_error(sampler + " at C=" + format_double(c) + " on clip '" +
                                   clip.clip_id + "': " + e.what());
        }
        correct += label == clip.label.value() ? 1 : 0;
        sensed_sum += trace.sensed_fraction();
        if (auto r = informative_recall(trace, test_importance[k], state0)) {
          recall_sum += *r;
          ++recall_count;
        }
        out.traces.push_back({sampler, c, cfg.capacity, clip.clip_id, std::move(trace)});
      }
      out.rows.push_back({dataset, sampler, c, static_cast<double>(correct) / n_clips,
                          recall_count > 0 ? recall_sum / recall_count : 0.0,
                          sensed_sum / n_clips, n_clips, cfg.seed});
    }
  }
  out.rows = sorted_rows(std::move(out.rows));
  return out;
}

ImputationStudy imputation_study(const std::vector<AnalyzedClip>& test,
                                 const ClassifierModel& augmented, const ClassifierModel& plain,
                                 double missing_fraction, std::uint64_t seed) {
  if (test.empty() || missing_fraction < 0.0 || missing_fraction >= 1.0) {
    throw std::invalid_argument("imputation study needs clips and a missing fraction in [0, 1)");
  }
  ImputationStudy s;
  s.missing_fraction = missing_fraction;
  int imputed_ok = 0;
  int zero_ok = 0;
  for (std::size_t k = 0; k < test.size(); ++k) {
    const AnalyzedClip& clip = test[k];
    const int n = clip.n_segments();
    const int keep = std::max(1, static_cast<int>(std::lround((1.0 - missing_fraction) * n)));
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    Rng rng(Rng::mix(seed, k));
    rng.shuffle(order);
    SegmentMask mask = SegmentMask::all(n, false);
    for (int i = 0; i < keep; ++i) {
      mask.bits[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = true;
    }
    imputed_ok += predict(augmented, impute(clip.mel, mask, clip.view)) == clip.label.value();
    zero_ok += predict(plain, zero_fill(clip.mel, mask, clip.view)) == clip.label.value();
  }
  s.imputed_accuracy = static_cast<double>(imputed_ok) / static_cast<double>(test.size());
  s.zero_fill_accuracy = static_cast<double>(zero_ok) / static_cast<double>(test.size());
  return s;
}

std::vector<TopKPoint> top_k_study(const std::vector<AnalyzedClip>& test,
                                   const std::vector<ImportanceVector>& test_importance,
                                   const ClassifierModel& classifier,
                                   const std::vector<double>& fractions) {
  std::vector<TopKPoint> out;
  for (double f : fractions) {
    if (!(f > 0.0) || f > 1.0) {
      throw std::invalid_argument("top-K fraction must lie in (0, 1]");
    }
    int correct = 0;
    for (std::size_t k = 0; k < test.size(); ++k) {
      const AnalyzedClip& clip = test[k];
      const auto& scores = test_importance[k].scores;
      const int n = clip.n_segments();
      const int keep = std::clamp(static_cast<int>(std::ceil(f * n - 1e-9)), 1, n);
      std::vector<int> order(static_cast<std::size_t>(n));
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return scores[static_cast<std::size_t>(a)] > scores[static_cast<std::size_t>(b)];
      });
      SegmentMask mask = SegmentMask::all(n, false);
      for (int i = 0; i < keep; ++i) {
        mask.bits[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = true;
      }
      correct += predict(classifier, impute(clip.mel, mask, clip.view)) == clip.label.value();
    }
    out.push_back({f, static_cast<double>(correct) / static_cast<double>(test.size())});
  }
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, std::ostream* log) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };
  ExperimentResult result;

  const Corpus corpus = load_corpus(cfg);
  note(log, "corpus: " + std::to_string(corpus.train.size()) + " train, " +
                std::to_string(corpus.test.size()) + " test clips, " +
                std::to_string(corpus.class_names.size()) + " classes");

  ClassifierTraining trained = train_stage(corpus, cfg, true);
  note(log, "classifier: train acc " + format_double(trained.report.train_accuracy) +
                ", held-out acc " + format_double(trained.report.validation_accuracy) + " (" +
                format_double(elapsed()) + " s)");

  result.models = fit_scheduler_models(corpus, std::move(trained), cfg);
  note(log, "explained training split, tau " + format_double(result.models.tau) +
                ", predictor loss " + format_double(result.models.predictor.final_train_loss) +
                " (" + format_double(elapsed()) + " s)");

  result.test_importance = explain_clips(corpus.test, result.models.classifier, cfg.explainer,
                                         cfg.stage_seed(Stage::ExplainTest));
  result.predictor_rank_corr =
      predictor_rank_correlation(result.models.predictor, result.models.classifier.first_layer_filter(),
                                 corpus.test, result.test_importance);

  SimulationOutput sim = simulate(corpus.test, result.test_importance, result.models.classifier,
                                  result.models.predictor, result.models.global, result.models.tau,
                                  cfg.dataset, cfg);
  result.rows = std::move(sim.rows);
  result.traces = std::move(sim.traces);
  note(log, "simulated " + std::to_string(result.traces.size()) + " traces (" +
                format_double(elapsed()) + " s)");

  const ClassifierTraining plain = train_stage(corpus, cfg, false);
  result.study = imputation_study(corpus.test, result.models.classifier, plain.model,
                                  cfg.study_missing_fraction, cfg.stage_seed(Stage::Study));
  result.top_k = top_k_study(corpus.test, result.test_importance, result.models.classifier,
                             cfg.k_fractions);
  result.elapsed_seconds = elapsed();
  note(log, "done in " + format_double(result.elapsed_seconds) + " s");
  return result;
}

void write_summary_json(const std::filesystem::path& path, const ExperimentConfig& cfg,
                        const ExperimentResult& result) {
  nlohmann::ordered_json j;
  j["dataset"] = cfg.dataset;
  j["seed"] = cfg.seed;
  j["capacity"] = cfg.capacity;
  j["charge_ratios"] = cfg.charge_ratios;
  j["elapsed_seconds"] = result.elapsed_seconds;
  const TrainReport& tr = result.models.classifier_report;
  j["classifier"] = {{"final_loss", tr.final_loss},
                     {"train_accuracy", tr.train_accuracy},
                     {"heldout_accuracy", tr.validation_accuracy},
                     {"layer_params", result.models.classifier.layer_param_counts()}};
  j["tau"] = result.models.tau;
  j["global_importance"] = result.models.global.mean_score;
  j["predictor"] = {{"final_train_loss", result.models.predictor.final_train_loss},
                    {"heldout_rank_correlation", result.predictor_rank_corr}};
  j["imputation_study"] = {{"missing_fraction", result.study.missing_fraction},
                           {"imputed_accuracy", result.study.imputed_accuracy},
                           {"zero_fill_accuracy", result.study.zero_fill_accuracy}};
  nlohmann::ordered_json topk = nlohmann::ordered_json::array();
  for (const auto& p : result.top_k) {
    topk.push_back({{"fraction", p.fraction}, {"accuracy", p.accuracy}});
  }
  j["top_k_study"] = topk;
  std::ofstream os(path);
  if (!os) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  os << j.dump(2) << '\n';
}

void write_outputs(const std::filesystem::path& dir, const ExperimentConfig& cfg,
                   const ExperimentResult& result) {
  std::filesystem::create_directories(dir);
  write_report(dir / "report.csv", result.rows);
  write_traces_csv(dir / "traces.csv", result.traces);
  write_summary_json(dir / "summary.json", cfg, result);
  save_classifier(dir / "classifier.txt", result.models.classifier);
  save_predictor(dir / "predictor.txt", result.models.predictor);
  write_importance_csv(dir / "importance_train.csv", result.models.train_importance);
  write_importance_csv(dir / "importance_test.csv", result.test_importance);
  write_global_csv(dir / "global.csv", result.models.global);
}

}  // namespace soundsieve
