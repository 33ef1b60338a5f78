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

#include "soundsieve/predictor.hpp"

#include "soundsieve/model_io.hpp"
#include "soundsieve/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace soundsieve {

int predictor_input_dim(int n_mel) { return kFramesPerSegment * (n_mel - 3) + 1; }

std::vector<double> predictor_input(const FeatureVector& features, int n_mel, int segment,
                                    int n_segments) {
  const int dim = predictor_input_dim(n_mel);
  if (static_cast<int>(features.size()) > dim - 1 || features.size() % (n_mel - 3) != 0) {
    throw std::invalid_argument("feature vector length " + std::to_string(features.size()) +
                                " does not fit a segment of " + std::to_string(n_mel) +
                                " mel bins");
  }
  std::vector<double> in(static_cast<std::size_t>(dim), 0.0);
  std::copy(features.begin(), features.end(), in.begin());
  in.back() = static_cast<double>(segment) / std::max(1, n_segments);
  return in;
}

PredictorDataset build_dataset(const std::vector<AnalyzedClip>& clips,
                               const std::vector<ImportanceVector>& importances,
                               const FrequencyFilter& filter) {
  if (clips.size() != importances.size()) {
    throw std::invalid_argument("build_dataset: clips and importances differ in count");
  }
  PredictorDataset ds;
  for (std::size_t k = 0; k < clips.size(); ++k) {
    const AnalyzedClip& clip = clips[k];
    const ImportanceVector& iv = importances[k];
    if (iv.clip_id != clip.clip_id || iv.size() != clip.n_segments()) {
      throw std::invalid_argument("build_dataset: importance vector does not match clip '" +
                                  clip.clip_id + "'");
    }
    const int n_mel = clip.mel.n_bins();
    if (ds.input_dim == 0) {
      ds.input_dim = predictor_input_dim(n_mel);
    } else if (ds.input_dim != predictor_input_dim(n_mel)) {
      throw std::invalid_argument("build_dataset: clips differ in mel resolution");
    }
    const int m = clip.n_segments();
    if (m < kHorizon + 1) {
      ds.skipped.push_back(clip.clip_id);
      continue;
    }
    for (int i = 0; i + kHorizon < m; ++i) {
      PredictorExample ex;
      ex.input = predictor_input(segment_feature(clip.mel, clip.view, i, filter), n_mel, i, m);
      for (int h = 0; h < kHorizon; ++h) {
        ex.target[h] = iv.scores[static_cast<std::size_t>(i + 1 + h)];
      }
      ex.clip_id = clip.clip_id;
      ex.segment = i;
      ds.examples.push_back(std::move(ex));
    }
  }
  return ds;
}

PredictorModel::PredictorModel(int input_dim, int hidden)
    : input_dim_(input_dim),
      hidden_(hidden),
      weights_(static_cast<std::size_t>(hidden) * input_dim + hidden +
                   static_cast<std::size_t>(kHorizon) * hidden + kHorizon,
               0.0),
      mean_(static_cast<std::size_t>(input_dim), 0.0),
      scale_(static_cast<std::size_t>(input_dim), 1.0) {
  if (input_dim < 1 || hidden < 1) {
    throw std::invalid_argument("predictor dimensions must be positive");
  }
}

PredictorModel PredictorModel::initialized(int input_dim, int hidden, std::uint64_t seed) {
  PredictorModel m(input_dim, hidden);
  Rng rng(seed);
  const std::size_t w1 = static_cast<std::size_t>(hidden) * input_dim;
  const double sd1 = std::sqrt(2.0 / input_dim);
  for (std::size_t i = 0; i < w1; ++i) {
    m.weights_[i] = sd1 * rng.normal();
  }
  const std::size_t w2 = w1 + hidden;
  const double sd2 = std::sqrt(1.0 / hidden);
  for (std::size_t i = 0; i < static_cast<std::size_t>(kHorizon) * hidden; ++i) {
    m.weights_[w2 + i] = sd2 * rng.normal();
  }
  return m;
}

namespace {

struct Activations {
  std::vector<double> x;  // standardized input
  std::vector<double> h;  // post-ReLU hidden
  HorizonScores out{};
};

Activations run(const PredictorModel& m, const std::vector<double>& input) {
  const int d = m.input_dim();
  const int hdim = m.hidden();
  Activations a;
  a.x.resize(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    a.x[i] = (input[i] - m.input_mean()[i]) / m.input_scale()[i];
  }
  const double* w = m.weights().data();
  const double* b1 = w + static_cast<std::size_t>(hdim) * d;
  const double* w2 = b1 + hdim;
  const double* b2 = w2 + static_cast<std::size_t>(kHorizon) * hdim;
  a.h.resize(static_cast<std::size_t>(hdim));
  for (int j = 0; j < hdim; ++j) {
    double acc = b1[j];
    const double* row = w + static_cast<std::size_t>(j) * d;
    for (int i = 0; i < d; ++i) {
      acc += row[i] * a.x[i];
    }
    a.h[j] = acc > 0.0 ? acc : 0.0;
  }
  for (int o = 0; o < kHorizon; ++o) {
    double acc = b2[o];
    const double* row = w2 + static_cast<std::size_t>(o) * hdim;
    for (int j = 0; j < hdim; ++j) {
      acc += row[j] * a.h[j];
    }
    a.out[o] = acc;
  }
  return a;
}

void check_input(const PredictorModel& m, const std::vector<double>& input) {
  if (static_cast<int>(input.size()) != m.input_dim()) {
    throw std::invalid_argument("predictor expects " + std::to_string(m.input_dim()) +
                                " inputs, got " + std::to_string(input.size()));
  }
}

}  // namespace

HorizonScores PredictorModel::raw_output(const std::vector<double>& input) const {
  check_input(*this, input);
  return run(*this, input).out;
}

HorizonScores predict_next(const PredictorModel& model, const std::vector<double>& input) {
  HorizonScores out = model.raw_output(input);
  for (double& v : out) {
    v = std::clamp(v, -1.0, 1.0);
  }
  return out;
}

double predictor_loss(const PredictorModel& model, const std::vector<PredictorExample>& batch,
                      std::vector<double>* grad) {
  if (batch.empty()) {
    return 0.0;
  }
  if (grad != nullptr && grad->size() != model.weights().size()) {
    throw std::invalid_argument("gradient buffer has the wrong size");
  }
  const int d = model.input_dim();
  const int hdim = model.hidden();
  const double* w = model.weights().data();
  const double* w2 = w + static_cast<std::size_t>(hdim) * d + hdim;
  const double norm = 1.0 / (static_cast<double>(batch.size()) * kHorizon);
  double total = 0.0;
  for (const auto& ex : batch) {
    check_input(model, ex.input);
    const Activations a = run(model, ex.input);
    std::array<double, kHorizon> d_out{};
    for (int o = 0; o < kHorizon; ++o) {
      const double e = a.out[o] - ex.target[o];
      total += e * e;
      d_out[o] = 2.0 * e * norm;
    }
    if (grad == nullptr) {
      continue;
    }
    double* g = grad->data();
    double* gb1 = g + static_cast<std::size_t>(hdim) * d;
    double* gw2 = gb1 + hdim;
    double* gb2 = gw2 + static_cast<std::size_t>(kHorizon) * hdim;
    for (int o = 0; o < kHorizon; ++o) {
      gb2[o] += d_out[o];
      for (int j = 0; j < hdim; ++j) {
        gw2[static_cast<std::size_t>(o) * hdim + j] += d_out[o] * a.h[j];
      }
    }
    for (int j = 0; j < hdim; ++j) {
      if (a.h[j] <= 0.0) {
        continue;
      }
      double dh = 0.0;
      for (int o = 0; o < kHorizon; ++o) {
        dh += d_out[o] * w2[static_cast<std::size_t>(o) * hdim + j];
      }
      gb1[j] += dh;
      double* row = g + static_cast<std::size_t>(j) * d;
      for (int i = 0; i < d; ++i) {
        row[i] += dh * a.x[i];
      }
    }
  }
  return total * norm;
}

PredictorModel train_predictor(const PredictorDataset& ds, const PredictorTrainConfig& cfg) {
  if (ds.examples.empty()) {
    throw std::invalid_argument("cannot train the predictor on an empty dataset");
  }
  if (cfg.batch < 1 || cfg.epochs < 0 || cfg.hidden < 1) {
    throw std::invalid_argument("invalid predictor training config");
  }
  const int d = ds.input_dim;
  PredictorModel model = PredictorModel::initialized(d, cfg.hidden, cfg.seed);

  // Standardize each input by its training mean and spread; constant inputs
  // keep unit scale.
  std::vector<double> mean(static_cast<std::size_t>(d), 0.0);
  std::vector<double> var(static_cast<std::size_t>(d), 0.0);
  for (const auto& ex : ds.examples) {
    for (int i = 0; i < d; ++i) {
      mean[i] += ex.input[i];
    }
  }
  for (double& m : mean) {
    m /= static_cast<double>(ds.examples.size());
  }
  for (const auto& ex : ds.examples) {
    for (int i = 0; i < d; ++i) {
      const double e = ex.input[i] - mean[i];
      var[i] += e * e;
    }
  }
  for (int i = 0; i < d; ++i) {
    const double sd = std::sqrt(var[i] / static_cast<double>(ds.examples.size()));
    model.input_mean()[i] = mean[i];
    model.input_scale()[i] = sd > 1e-12 ? sd : 1.0;
  }

  Rng rng(Rng::mix(cfg.seed, 0x9ED1C7));
  std::vector<std::size_t> order(ds.examples.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> grad(model.weights().size());
  std::vector<PredictorExample> batch;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t start = 0; start < order.size(); start += cfg.batch) {
      const std::size_t end = std::min(order.size(), start + cfg.batch);
      batch.clear();
      for (std::size_t i = start; i < end; ++i) {
        batch.push_back(ds.examples[order[i]]);
      }
      std::fill(grad.begin(), grad.end(), 0.0);
      const double l = predictor_loss(model, batch, &grad);
      if (!std::isfinite(l)) {
        throw std::runtime_error("predictor training diverged (non-finite loss) at epoch " +
                                 std::to_string(epoch));
      }
      auto& w = model.weights();
      for (std::size_t j = 0; j < w.size(); ++j) {
        w[j] -= cfg.lr * grad[j];
      }
    }
  }
  model.final_train_loss = predictor_loss(model, ds.examples, nullptr);
  return model;
}

void save_predictor(const std::filesystem::path& path, const PredictorModel& model) {
  ModelFile file;
  file.kind = "predictor";
  file.set("input_dim", static_cast<long long>(model.input_dim()));
  file.set("hidden", static_cast<long long>(model.hidden()));
  file.set("horizon", static_cast<long long>(kHorizon));
  file.set("final_train_loss", model.final_train_loss);
  // Order: standardization mean, standardization scale, then trainable weights.
  file.values = model.input_mean();
  file.values.insert(file.values.end(), model.input_scale().begin(), model.input_scale().end());
  file.values.insert(file.values.end(), model.weights().begin(), model.weights().end());
  write_model_file(path, file);
}

PredictorModel load_predictor(const std::filesystem::path& path) {
  const ModelFile file = read_model_file(path, "predictor");
  if (file.get_int("horizon") != kHorizon) {
    throw std::runtime_error(path.string() + ": unsupported horizon");
  }
  PredictorModel m(static_cast<int>(file.get_int("input_dim")),
                   static_cast<int>(file.get_int("hidden")));
  m.final_train_loss = file.get_double("final_train_loss");
  const std::size_t d = static_cast<std::size_t>(m.input_dim());
  if (file.values.size() != 2 * d + m.weights().size()) {
    throw std::runtime_error(path.string() + ": parameter count does not match dimensions");
  }
  std::copy_n(file.values.begin(), d, m.input_mean().begin());
  std::copy_n(file.values.begin() + static_cast<std::ptrdiff_t>(d), d, m.input_scale().begin());
  std::copy(file.values.begin() + static_cast<std::ptrdiff_t>(2 * d), file.values.end(),
            m.weights().begin());
  return m;
}

}  // namespace soundsieve
