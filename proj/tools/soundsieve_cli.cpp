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

// Command-line front end: synth, train, explain, train-predictor, simulate,
// report, all.

#include "soundsieve/experiment.hpp"
#include "soundsieve/model_io.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <map>
#include <string>

namespace fs = std::filesystem;
using namespace soundsieve;

namespace {

struct Options {
  ExperimentConfig exp;
  std::uint64_t seed = 0;
  std::string data;
  std::string out;
  std::string classifier_path = "classifier.txt";
  std::string predictor_path = "predictor.txt";
  std::string importance_path = "importance.csv";
  std::string global_path;
  std::string traces_path;
  std::string split = "train";
  std::vector<std::string> inputs;
  bool quiet = false;
};

void apply_data(Options& o) {
  o.exp.seed = o.seed;
  if (!o.data.empty()) {
    o.exp.data_dir = o.data;
    if (o.exp.dataset == "synthetic") {
      o.exp.dataset = fs::path(o.data).filename().string();
    }
  }
}

std::ostream* log_stream(const Options& o) { return o.quiet ? nullptr : &std::cerr; }

void cmd_synth(Options& o) {
  if (o.out.empty()) {
    throw std::invalid_argument("synth needs --out DIR");
  }
  SyntheticSpec spec = o.exp.synth;
  spec.seed = o.exp.stage_seed(Stage::Synth);
  LabeledAudio audio{synthetic_class_names(spec), gen_synthetic(spec)};
  write_wav_directory(o.out, audio);
  std::cout << "wrote " << audio.clips.size() << " clips to " << o.out << '\n';
}

void cmd_train(Options& o) {
  const Corpus corpus = load_corpus(o.exp);
  const ClassifierTraining t = train_stage(corpus, o.exp, true);
  save_classifier(o.classifier_path, t.model);
  std::cout << "classifier: loss " << format_double(t.report.final_loss) << ", train acc "
            << format_double(t.report.train_accuracy) << ", held-out acc "
            << format_double(t.report.validation_accuracy) << " -> " << o.classifier_path << '\n';
}

void cmd_explain(Options& o) {
  const Corpus corpus = load_corpus(o.exp);
  const ClassifierModel model = load_classifier(o.classifier_path);
  if (o.split != "train" && o.split != "test") {
    throw std::invalid_argument("--split must be train or test");
  }
  const auto& clips = o.split == "train" ? corpus.train : corpus.test;
  const auto imp = explain_clips(clips, model, o.exp.explainer,
                                 o.exp.stage_seed(o.split == "train" ? Stage::ExplainTrain : Stage::ExplainTest));
  write_importance_csv(o.importance_path, imp);
  const GlobalImportance global = aggregate_global(imp);
  if (!o.global_path.empty()) {
    write_global_csv(o.global_path, global);
  }
  std::cout << "explained " << imp.size() << " clips, tau "
            << format_double(score_percentile(imp, o.exp.tau_percentile)) << " -> "
            << o.importance_path << '\n';
}

// Importance rows reordered to match the clip order of `clips`.
std::vector<ImportanceVector> match_importance(const std::vector<AnalyzedClip>& clips,
                                               const std::vector<ImportanceVector>& imp) {
  std::map<std::string, const ImportanceVector*> by_id;
  for (const auto& iv : imp) {
    by_id[iv.clip_id] = &iv;
  }
  std::vector<ImportanceVector> out;
  for (const auto& clip : clips) {
    auto it = by_id.find(clip.clip_id);
    if (it == by_id.end()) {
      throw std::runtime_error("no importance scores for clip '" + clip.clip_id + "'");
    }
    out.push_back(*it->second);
  }
  return out;
}

void cmd_train_predictor(Options& o) {
  const Corpus corpus = load_corpus(o.exp);
  const ClassifierModel model = load_classifier(o.classifier_path);
  const auto imp = match_importance(corpus.train, read_importance_csv(o.importance_path));
  const PredictorDataset ds = build_dataset(corpus.train, imp, model.first_layer_filter());
  for (const auto& id : ds.skipped) {
    std::cerr << "warning: clip '" << id << "' has fewer than 6 segments, skipped\n";
  }
  PredictorTrainConfig pc = o.exp.predictor;
  pc.seed = o.exp.stage_seed(Stage::Predictor);
  const PredictorModel p = train_predictor(ds, pc);
  save_predictor(o.predictor_path, p);
  std::cout << "predictor: " << ds.examples.size() << " examples, final loss "
            << format_double(p.final_train_loss) << " -> " << o.predictor_path << '\n';
}

void cmd_simulate(Options& o) {
  if (o.out.empty()) {
    throw std::invalid_argument("simulate needs --out FILE for the result rows");
  }
  const Corpus corpus = load_corpus(o.exp);
  const ClassifierModel classifier = load_classifier(o.classifier_path);
  const PredictorModel predictor = load_predictor(o.predictor_path);
  const auto train_imp = read_importance_csv(o.importance_path);
  const GlobalImportance global = aggregate_global(train_imp);
  const double tau = score_percentile(train_imp, o.exp.tau_percentile);
  const auto test_imp = explain_clips(corpus.test, classifier, o.exp.explainer, o.exp.stage_seed(Stage::ExplainTest));
  const SimulationOutput sim =
      simulate(corpus.test, test_imp, classifier, predictor, global, tau, o.exp.dataset, o.exp);
  write_report(o.out, sim.rows);
  if (!o.traces_path.empty()) {
    write_traces_csv(o.traces_path, sim.traces);
  }
  std::cout << format_report(sim.rows);
}

void cmd_report(Options& o) {
  if (o.inputs.empty() || o.out.empty()) {
    throw std::invalid_argument("report needs --in FILE... and --out FILE");
  }
  std::vector<ResultRow> rows;
  for (const auto& in : o.inputs) {
    auto r = read_report(in);
    rows.insert(rows.end(), r.begin(), r.end());
  }
  write_report(o.out, rows);
  std::cout << "wrote " << rows.size() << " rows to " << o.out << '\n';
}

void cmd_all(Options& o) {
  const fs::path dir = o.out.empty() ? fs::path("soundsieve_out") : fs::path(o.out);
  const ExperimentResult r = run_experiment(o.exp, log_stream(o));
  write_outputs(dir, o.exp, r);
  std::cout << format_report(r.rows);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"soundsieve: importance-aware audio sampling under intermittent power"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value configuration file ('#' starts a comment)");
  Options o;
  ExperimentConfig& e = o.exp;

  auto* seed_opt = app.add_option("--seed", o.seed, "Master random seed");
  app.add_option("--data", o.data, "WAV corpus directory (<class>/*.wav); synthetic if omitted");
  app.add_option("--dataset", e.dataset, "Dataset name written to reports");
  app.add_option("--test-fraction", e.test_fraction, "Held-out fraction per class");
  app.add_flag("--quiet", o.quiet, "No progress messages");

  app.add_option("--clips-per-class", e.synth.clips_per_class, "Synthetic clips per class");
  app.add_option("--clip-seconds-min", e.synth.clip_seconds_min, "Shortest synthetic clip (s)");
  app.add_option("--clip-seconds-max", e.synth.clip_seconds_max, "Longest synthetic clip (s)");
  app.add_option("--noise-floor", e.synth.noise_floor, "Synthetic noise amplitude");
  app.add_option("--tone-amplitude", e.synth.tone_amplitude, "Synthetic tone amplitude");

  app.add_option("--epochs", e.classifier.epochs, "Classifier epochs");
  app.add_option("--lr", e.classifier.lr, "Classifier learning rate");
  app.add_option("--batch", e.classifier.batch, "Classifier batch size");
  app.add_option("--augment-prob", e.classifier.augment_prob, "Perforation augmentation probability");
  app.add_option("--n-aug", e.explainer.n_aug, "Perturbations per explained clip");
  app.add_option("--ridge-lambda", e.explainer.lambda, "Surrogate ridge penalty");
  app.add_option("--predictor-epochs", e.predictor.epochs, "Predictor epochs");
  app.add_option("--predictor-lr", e.predictor.lr, "Predictor learning rate");
  app.add_option("--tau-percentile", e.tau_percentile, "Threshold percentile of training scores");
  app.add_option("--t-idle-max", e.t_idle_max, "Tolerated skips at full charge");
  app.add_option("-B,--capacity", e.capacity, "Energy buffer capacity in segments");
  app.add_option("-C,--charge-ratios", e.charge_ratios, "Charge ratios to simulate");

  app.add_option("--classifier", o.classifier_path, "Classifier model file");
  app.add_option("--predictor", o.predictor_path, "Predictor model file");
  app.add_option("--importance", o.importance_path, "Local importance CSV");

  auto* synth = app.add_subcommand("synth", "Write the synthetic corpus as WAV files");
  synth->add_option("--out", o.out, "Output directory")->required();

  app.add_subcommand("train", "Train the classifier with perforation augmentation");

  auto* explain = app.add_subcommand("explain", "Local and global segment importance");
  explain->add_option("--split", o.split, "train or test");
  explain->add_option("--global", o.global_path, "Also write global importance CSV");

  app.add_subcommand("train-predictor", "Train the next-5 importance predictor");

  auto* simulate_cmd = app.add_subcommand("simulate", "Run every sampler on the test split");
  simulate_cmd->add_option("--out", o.out, "Result rows CSV")->required();
  simulate_cmd->add_option("--traces", o.traces_path, "Also write every trace");

  auto* report = app.add_subcommand("report", "Merge result CSVs into a sorted report");
  report->add_option("--in", o.inputs, "Result CSVs")->required();
  report->add_option("--out", o.out, "Report CSV")->required();

  auto* all = app.add_subcommand("all", "Full pipeline into an output directory");
  all->add_option("--out", o.out, "Output directory");

  for (auto* sub : app.get_subcommands({})) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    return app.exit(err);
  }

  try {
    apply_data(o);
    if (all->parsed()) {
      if (seed_opt->count() == 0) {
        throw std::invalid_argument("all requires --seed");
      }
      cmd_all(o);
    } else if (synth->parsed()) {
      cmd_synth(o);
    } else if (app.got_subcommand("train")) {
      cmd_train(o);
    } else if (explain->parsed()) {
      cmd_explain(o);
    } else if (app.got_subcommand("train-predictor")) {
      cmd_train_predictor(o);
    } else if (simulate_cmd->parsed()) {
      cmd_simulate(o);
    } else if (report->parsed()) {
      cmd_report(o);
    }
  } catch (const std::exception& err) {
    std::cerr << "soundsieve: error: " << err.what() << '\n';
    return 1;
  }
  return 0;
}
