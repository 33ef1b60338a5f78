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

#include "soundsieve/classifier.hpp"

#include "soundsieve/imputation.hpp"
#include "soundsieve/model_io.hpp"
#include "soundsieve/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace soundsieve {

namespace {

struct Tensor {
  int c = 0;
  int h = 0;
  int w = 0;
  std::vector<double> v;

  Tensor() = default;
  Tensor(int c_, int h_, int w_) : c(c_), h(h_), w(w_), v(static_cast<std::size_t>(c_) * h_ * w_) {}

  double* plane(int ch) { return v.data() + static_cast<std::size_t>(ch) * h * w; }
  const double* plane(int ch) const { return v.data() + static_cast<std::size_t>(ch) * h * w; }
};

struct ConvShape {
  int cin;
  int cout;
  int kh;
  int kw;
  std::size_t weights() const { return static_cast<std::size_t>(cout) * cin * kh * kw; }
};

ConvShape conv_shape(const ClassifierArch& a, int layer) {
  switch (layer) {
    case 0: return {1, a.channels[0], 1, 4};
    case 1: return {a.channels[0], a.channels[1], 3, 3};
    case 2: return {a.channels[1], a.channels[2], 3, 3};
    default: return {a.channels[2], a.channels[3], 3, 3};
  }
}

// Valid cross-correlation, stride 1. Weight layout [cout][cin][kh][kw].
Tensor conv_forward(const Tensor& in, const double* w, const double* b, const ConvShape& s) {
  Tensor out(s.cout, in.h - s.kh + 1, in.w - s.kw + 1);
  for (int co = 0; co < s.cout; ++co) {
    double* o = out.plane(co);
    std::fill(o, o + static_cast<std::size_t>(out.h) * out.w, b[co]);
    for (int ci = 0; ci < s.cin; ++ci) {
      const double* x = in.plane(ci);
      const double* k = w + (static_cast<std::size_t>(co) * s.cin + ci) * s.kh * s.kw;
      for (int ky = 0; ky < s.kh; ++ky) {
        for (int kx = 0; kx < s.kw; ++kx) {
          const double wk = k[ky * s.kw + kx];
          for (int y = 0; y < out.h; ++y) {
            const double* xr = x + static_cast<std::size_t>(y + ky) * in.w + kx;
            double* orow = o + static_cast<std::size_t>(y) * out.w;
            for (int xx = 0; xx < out.w; ++xx) {
              orow[xx] += wk * xr[xx];
            }
          }
        }
      }
    }
  }
  return out;
}

// Accumulates weight/bias gradients; returns the input gradient when wanted.
void conv_backward(const Tensor& in, const Tensor& d_out, const double* w, const ConvShape& s,
                   double* dw, double* db, Tensor* d_in) {
  if (d_in != nullptr) {
    *d_in = Tensor(in.c, in.h, in.w);
  }
  for (int co = 0; co < s.cout; ++co) {
    const double* g = d_out.plane(co);
    double bsum = 0.0;
    for (std::size_t i = 0; i < static_cast<std::size_t>(d_out.h) * d_out.w; ++i) {
      bsum += g[i];
    }
    db[co] += bsum;
    for (int ci = 0; ci < s.cin; ++ci) {
      const double* x = in.plane(ci);
      const std::size_t koff = (static_cast<std::size_t>(co) * s.cin + ci) * s.kh * s.kw;
      double* dx = d_in != nullptr ? d_in->plane(ci) : nullptr;
      for (int ky = 0; ky < s.kh; ++ky) {
        for (int kx = 0; kx < s.kw; ++kx) {
          const double wk = w[koff + ky * s.kw + kx];
          double acc = 0.0;
          for (int y = 0; y < d_out.h; ++y) {
            const double* xr = x + static_cast<std::size_t>(y + ky) * in.w + kx;
            const double* gr = g + static_cast<std::size_t>(y) * d_out.w;
            for (int xx = 0; xx < d_out.w; ++xx) {
              acc += gr[xx] * xr[xx];
            }
            if (dx != nullptr) {
              double* dxr = dx + static_cast<std::size_t>(y + ky) * in.w + kx;
              for (int xx = 0; xx < d_out.w; ++xx) {
                dxr[xx] += wk * gr[xx];
              }
            }
          }
          dw[koff + ky * s.kw + kx] += acc;
        }
      }
    }
  }
}

void relu_inplace(Tensor& t) {
  for (double& x : t.v) {
    x = x > 0.0 ? x : 0.0;
  }
}

// Zeroes gradient entries where the activation was clipped.
void relu_backward(const Tensor& activated, Tensor& grad) {
  for (std::size_t i = 0; i < grad.v.size(); ++i) {
    if (activated.v[i] <= 0.0) {
      grad.v[i] = 0.0;
    }
  }
}

int pooled_len(int n) { return (n + 1) / 2; }

struct Pooled {
  Tensor out;
  std::vector<std::size_t> argmax;  // flat index into the pool input
};

// 2x2 max pool with stride 2. An odd trailing row or column forms its own
// smaller window so that no input position is dropped.
Pooled maxpool2(const Tensor& in) {
  Pooled p{Tensor(in.c, pooled_len(in.h), pooled_len(in.w)), {}};
  p.argmax.resize(p.out.v.size());
  std::size_t k = 0;
  for (int ch = 0; ch < in.c; ++ch) {
    const std::size_t base = static_cast<std::size_t>(ch) * in.h * in.w;
    for (int y = 0; y < p.out.h; ++y) {
      for (int x = 0; x < p.out.w; ++x) {
        std::size_t best = base + static_cast<std::size_t>(2 * y) * in.w + 2 * x;
        for (int dy = 0; dy < 2 && 2 * y + dy < in.h; ++dy) {
          for (int dx = 0; dx < 2 && 2 * x + dx < in.w; ++dx) {
            const std::size_t idx = base + static_cast<std::size_t>(2 * y + dy) * in.w + 2 * x + dx;
            if (in.v[idx] > in.v[best]) {
              best = idx;
            }
          }
        }
        p.out.v[k] = in.v[best];
        p.argmax[k] = best;
        ++k;
      }
    }
  }
  return p;
}

Tensor maxpool2_backward(const Tensor& in_shape, const Pooled& p, const Tensor& d_out) {
  Tensor d_in(in_shape.c, in_shape.h, in_shape.w);
  for (std::size_t k = 0; k < d_out.v.size(); ++k) {
    d_in.v[p.argmax[k]] += d_out.v[k];
  }
  return d_in;
}

struct Cache {
  Tensor x0;
  Tensor a1, a2, a3, a4;
  Pooled p2, p3, p4;
  std::vector<double> g;
  std::vector<std::size_t> g_arg;  // flat index into p4
  std::vector<double> h;
  std::vector<double> probs;
};

// Spatial extent after the conv/pool stack along one axis.
int final_extent(int n, bool frequency_axis) {
  n = frequency_axis ? n - 3 : n;
  for (int l = 0; l < 3; ++l) {
    n = pooled_len(n - 2);
    if (n < 1) {
      return 0;
    }
  }
  return n;
}

void forward_cached(const ClassifierModel& m, const Spectrogram& mel, Cache& c) {
  const ClassifierArch& a = m.arch();
  if (mel.n_bins() != a.n_mel) {
    throw std::invalid_argument("classifier expects " + std::to_string(a.n_mel) +
                                " mel bins, got " + std::to_string(mel.n_bins()));
  }
  if (mel.n_frames() < m.min_frames()) {
    throw std::invalid_argument("input has " + std::to_string(mel.n_frames()) +
                                " frames; classifier needs at least " +
                                std::to_string(m.min_frames()));
  }
  const double* p = m.params().data();
  auto w_of = [&](int l) { return p + m.layer_offset(l); };
  auto b_of = [&](int l, std::size_t nw) { return p + m.layer_offset(l) + nw; };

  c.x0 = Tensor(1, mel.n_frames(), mel.n_bins());
  const double shift = m.input_shift();
  const double inv_scale = 1.0 / m.input_scale();
  std::transform(mel.frames.data(), mel.frames.data() + mel.frames.size(), c.x0.v.begin(),
                 [&](double x) { return (x - shift) * inv_scale; });

  const ConvShape s1 = conv_shape(a, 0);
  c.a1 = conv_forward(c.x0, w_of(0), b_of(0, s1.weights()), s1);
  relu_inplace(c.a1);

  const ConvShape s2 = conv_shape(a, 1);
  c.a2 = conv_forward(c.a1, w_of(1), b_of(1, s2.weights()), s2);
  relu_inplace(c.a2);
  c.p2 = maxpool2(c.a2);

  const ConvShape s3 = conv_shape(a, 2);
  c.a3 = conv_forward(c.p2.out, w_of(2), b_of(2, s3.weights()), s3);
  relu_inplace(c.a3);
  c.p3 = maxpool2(c.a3);

  const ConvShape s4 = conv_shape(a, 3);
  c.a4 = conv_forward(c.p3.out, w_of(3), b_of(3, s4.weights()), s4);
  relu_inplace(c.a4);
  c.p4 = maxpool2(c.a4);

  const Tensor& t = c.p4.out;
  const std::size_t plane = static_cast<std::size_t>(t.h) * t.w;
  c.g.assign(t.c, 0.0);
  c.g_arg.assign(t.c, 0);
  for (int ch = 0; ch < t.c; ++ch) {
    const double* x = t.plane(ch);
    const auto it = std::max_element(x, x + plane);
    c.g[ch] = *it;
    c.g_arg[ch] = static_cast<std::size_t>(ch) * plane + static_cast<std::size_t>(it - x);
  }

  const int hidden = a.dense_hidden;
  const int c4 = a.channels[3];
  const double* w5 = w_of(4);
  const double* b5 = w5 + static_cast<std::size_t>(hidden) * c4;
  c.h.assign(hidden, 0.0);
  for (int j = 0; j < hidden; ++j) {
    double acc = b5[j];
    for (int i = 0; i < c4; ++i) {
      acc += w5[static_cast<std::size_t>(j) * c4 + i] * c.g[i];
    }
    c.h[j] = acc > 0.0 ? acc : 0.0;
  }

  const int k = a.n_classes;
  const double* w6 = w_of(5);
  const double* b6 = w6 + static_cast<std::size_t>(k) * hidden;
  std::vector<double> logits(k);
  for (int j = 0; j < k; ++j) {
    double acc = b6[j];
    for (int i = 0; i < hidden; ++i) {
      acc += w6[static_cast<std::size_t>(j) * hidden + i] * c.h[i];
    }
    logits[j] = acc;
  }
  const double mx = *std::max_element(logits.begin(), logits.end());
  double z = 0.0;
  c.probs.resize(k);
  for (int j = 0; j < k; ++j) {
    c.probs[j] = std::exp(logits[j] - mx);
    z += c.probs[j];
  }
  for (double& v : c.probs) {
    v /= z;
  }
}

double cross_entropy(const std::vector<double>& probs, int label) {
  return -std::log(std::max(probs[label], std::numeric_limits<double>::min()));
}

void check_label(const ClassifierModel& m, int label) {
  if (label < 0 || label >= m.n_classes()) {
    throw std::out_of_range("label " + std::to_string(label) + " outside [0, " +
                            std::to_string(m.n_classes()) + ")");
  }
}

}  // namespace

ClassifierModel::ClassifierModel(const ClassifierArch& arch) : arch_(arch) {
  if (arch.n_classes < 1 || arch.dense_hidden < 1) {
    throw std::invalid_argument("invalid classifier architecture");
  }
  if (final_extent(arch.n_mel, true) < 1) {
    throw std::invalid_argument("too few mel bins for the conv stack");
  }
  for (int ch : arch.channels) {
    if (ch < 1) {
      throw std::invalid_argument("channel counts must be positive");
    }
  }
  const auto counts = layer_param_counts();
  offsets_[0] = 0;
  for (int l = 0; l < kLayers; ++l) {
    offsets_[l + 1] = offsets_[l] + static_cast<std::size_t>(counts[l]);
  }
  params_.assign(offsets_[kLayers], 0.0);
}

std::array<int, ClassifierModel::kLayers> ClassifierModel::layer_param_counts() const {
  std::array<int, kLayers> counts{};
  for (int l = 0; l < 4; ++l) {
    const ConvShape s = conv_shape(arch_, l);
    counts[l] = static_cast<int>(s.weights()) + s.cout;
  }
  counts[4] = arch_.channels[3] * arch_.dense_hidden + arch_.dense_hidden;
  counts[5] = arch_.dense_hidden * arch_.n_classes + arch_.n_classes;
  return counts;
}

ClassifierModel ClassifierModel::initialized(const ClassifierArch& arch, std::uint64_t seed) {
  ClassifierModel m(arch);
  Rng rng(seed);
  auto fill = [&](int layer, std::size_t n_weights, int fan_in) {
    const double sd = std::sqrt(2.0 / fan_in);
    double* w = m.params_.data() + m.offsets_[layer];
    for (std::size_t i = 0; i < n_weights; ++i) {
      w[i] = sd * rng.normal();
    }
  };
  for (int l = 0; l < 4; ++l) {
    const ConvShape s = conv_shape(arch, l);
    fill(l, s.weights(), s.cin * s.kh * s.kw);
  }
  fill(4, static_cast<std::size_t>(arch.channels[3]) * arch.dense_hidden, arch.channels[3]);
  fill(5, static_cast<std::size_t>(arch.dense_hidden) * arch.n_classes, arch.dense_hidden);
  return m;
}

FrequencyFilter ClassifierModel::first_layer_filter() const {
  if (arch_.channels[0] != 1) {
    throw std::logic_error("feature sharing needs a single first-layer channel");
  }
  FrequencyFilter f;
  f.bias = params_[offsets_[0] + 4];
  for (int k = 0; k < 4; ++k) {
    f.taps[k] = params_[offsets_[0] + k] / input_scale_;
    f.bias -= f.taps[k] * input_shift_;
  }
  return f;
}

void ClassifierModel::set_input_normalization(double shift, double scale) {
  if (!std::isfinite(shift) || !(scale > 0.0) || !std::isfinite(scale)) {
    throw std::invalid_argument("input normalization needs a finite shift and positive scale");
  }
  input_shift_ = shift;
  input_scale_ = scale;
}

int ClassifierModel::min_frames() const {
  for (int t = 1; t < 4096; ++t) {
    if (final_extent(t, false) >= 1) {
      return t;
    }
  }
  return 4096;
}

std::vector<double> forward(const ClassifierModel& model, const Spectrogram& mel) {
  Cache c;
  forward_cached(model, mel, c);
  return c.probs;
}

std::vector<double> global_max_activations(const ClassifierModel& model, const Spectrogram& mel) {
  Cache c;
  forward_cached(model, mel, c);
  return c.g;
}

int predict(const ClassifierModel& model, const Spectrogram& mel) {
  const auto p = forward(model, mel);
  return static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
}

double true_class_score(const ClassifierModel& model, const Spectrogram& mel, int label) {
  check_label(model, label);
  return forward(model, mel)[label];
}

double loss(const ClassifierModel& model, const Spectrogram& mel, int label) {
  check_label(model, label);
  return cross_entropy(forward(model, mel), label);
}

double loss_and_gradient(const ClassifierModel& model, const Spectrogram& mel, int label,
                         std::vector<double>& grad) {
  check_label(model, label);
  if (grad.size() != model.param_count()) {
    throw std::invalid_argument("gradient buffer has the wrong size");
  }
  const ClassifierArch& a = model.arch();
  Cache c;
  forward_cached(model, mel, c);

  const double* p = model.params().data();
  double* gp = grad.data();
  const int k = a.n_classes;
  const int hidden = a.dense_hidden;
  const int c4 = a.channels[3];

  // Softmax + cross-entropy.
  std::vector<double> d_logits = c.probs;
  d_logits[label] -= 1.0;

  const double* w6 = p + model.layer_offset(5);
  double* dw6 = gp + model.layer_offset(5);
  double* db6 = dw6 + static_cast<std::size_t>(k) * hidden;
  std::vector<double> d_h(hidden, 0.0);
  for (int j = 0; j < k; ++j) {
    db6[j] += d_logits[j];
    for (int i = 0; i < hidden; ++i) {
      dw6[static_cast<std::size_t>(j) * hidden + i] += d_logits[j] * c.h[i];
      d_h[i] += d_logits[j] * w6[static_cast<std::size_t>(j) * hidden + i];
    }
  }

  const double* w5 = p + model.layer_offset(4);
  double* dw5 = gp + model.layer_offset(4);
  double* db5 = dw5 + static_cast<std::size_t>(hidden) * c4;
  std::vector<double> d_g(c4, 0.0);
  for (int j = 0; j < hidden; ++j) {
    if (c.h[j] <= 0.0) {
      continue;
    }
    db5[j] += d_h[j];
    for (int i = 0; i < c4; ++i) {
      dw5[static_cast<std::size_t>(j) * c4 + i] += d_h[j] * c.g[i];
      d_g[i] += d_h[j] * w5[static_cast<std::size_t>(j) * c4 + i];
    }
  }

  Tensor d_p4(c.p4.out.c, c.p4.out.h, c.p4.out.w);
  for (int ch = 0; ch < c4; ++ch) {
    d_p4.v[c.g_arg[ch]] += d_g[ch];
  }

  Tensor d_a4 = maxpool2_backward(c.a4, c.p4, d_p4);
  relu_backward(c.a4, d_a4);
  const ConvShape s4 = conv_shape(a, 3);
  Tensor d_p3;
  conv_backward(c.p3.out, d_a4, p + model.layer_offset(3), s4, gp + model.layer_offset(3),
                gp + model.layer_offset(3) + s4.weights(), &d_p3);

  Tensor d_a3 = maxpool2_backward(c.a3, c.p3, d_p3);
  relu_backward(c.a3, d_a3);
  const ConvShape s3 = conv_shape(a, 2);
  Tensor d_p2;
  conv_backward(c.p2.out, d_a3, p + model.layer_offset(2), s3, gp + model.layer_offset(2),
                gp + model.layer_offset(2) + s3.weights(), &d_p2);

  Tensor d_a2 = maxpool2_backward(c.a2, c.p2, d_p2);
  relu_backward(c.a2, d_a2);
  const ConvShape s2 = conv_shape(a, 1);
  Tensor d_a1;
  conv_backward(c.a1, d_a2, p + model.layer_offset(1), s2, gp + model.layer_offset(1),
                gp + model.layer_offset(1) + s2.weights(), &d_a1);

  relu_backward(c.a1, d_a1);
  const ConvShape s1 = conv_shape(a, 0);
  conv_backward(c.x0, d_a1, p + model.layer_offset(0), s1, gp + model.layer_offset(0),
                gp + model.layer_offset(0) + s1.weights(), nullptr);

  return cross_entropy(c.probs, label);
}

double accuracy(const ClassifierModel& model, const std::vector<AnalyzedClip>& clips) {
  if (clips.empty()) {
    return 0.0;
  }
  int hits = 0;
  for (const auto& clip : clips) {
    if (clip.label && predict(model, clip.mel) == *clip.label) {
      ++hits;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(clips.size());
}

ClassifierTraining train_classifier(const std::vector<AnalyzedClip>& train,
                                    const std::vector<AnalyzedClip>& validation,
                                    const ClassifierArch& arch, const TrainConfig& cfg) {
  if (train.empty()) {
    throw std::invalid_argument("empty training set");
  }
  if (cfg.augment_prob < 0.0 || cfg.augment_prob > 1.0 || cfg.mask_keep_prob < 0.0 ||
      cfg.mask_keep_prob > 1.0) {
    throw std::invalid_argument("train config probabilities must lie in [0, 1]");
  }
  if (cfg.batch < 1 || cfg.epochs < 0 || cfg.clip_norm < 0.0) {
    throw std::invalid_argument("batch must be positive and epochs non-negative");
  }
  for (const auto& clip : train) {
    if (!clip.label || *clip.label < 0 || *clip.label >= arch.n_classes) {
      throw std::invalid_argument("training clip '" + clip.clip_id + "' has no valid label");
    }
  }

  ClassifierTraining out{ClassifierModel::initialized(arch, cfg.seed), {}};
  ClassifierModel& model = out.model;
  {
    // Center and scale inputs by the clean training mel statistics.
    double sum = 0.0, sq = 0.0, count = 0.0;
    for (const auto& clip : train) {
      sum += clip.mel.frames.sum();
      sq += clip.mel.frames.squaredNorm();
      count += static_cast<double>(clip.mel.frames.size());
    }
    const double mean = sum / count;
    const double sd = std::sqrt(std::max(0.0, sq / count - mean * mean));
    model.set_input_normalization(mean, sd > 1e-12 ? sd : 1.0);
  }
  Rng rng(Rng::mix(cfg.seed, 0xC1A55));
  std::vector<double> velocity(model.param_count(), 0.0);
  std::vector<double> grad(model.param_count(), 0.0);
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);

  double epoch_loss = 0.0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(order);
    epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch) {
      const std::size_t end = std::min(order.size(), start + cfg.batch);
      std::fill(grad.begin(), grad.end(), 0.0);
      for (std::size_t i = start; i < end; ++i) {
        const AnalyzedClip& clip = train[order[i]];
        double l = 0.0;
        if (rng.bernoulli(cfg.augment_prob)) {
          std::vector<bool> bits(clip.n_segments());
          do {
            for (std::size_t s = 0; s < bits.size(); ++s) {
              bits[s] = rng.bernoulli(cfg.mask_keep_prob);
            }
          } while (std::none_of(bits.begin(), bits.end(), [](bool b) { return b; }));
          const Spectrogram perforated = impute(clip.mel, SegmentMask(bits), clip.view);
          l = loss_and_gradient(model, perforated, *clip.label, grad);
        } else {
          l = loss_and_gradient(model, clip.mel, *clip.label, grad);
        }
        if (!std::isfinite(l)) {
          throw std::runtime_error("classifier training diverged (non-finite loss) at epoch " +
                                   std::to_string(epoch) + " on clip '" + clip.clip_id + "'");
        }
        epoch_loss += l;
      }
      double scale = 1.0 / static_cast<double>(end - start);
      if (cfg.clip_norm > 0.0) {
        double sq = 0.0;
        for (double g : grad) {
          sq += g * g;
        }
        const double norm = scale * std::sqrt(sq);
        if (norm > cfg.clip_norm) {
          scale *= cfg.clip_norm / norm;
        }
      }
      auto& params = model.params();
      for (std::size_t j = 0; j < params.size(); ++j) {
        velocity[j] = cfg.momentum * velocity[j] - cfg.lr * scale * grad[j];
        params[j] += velocity[j];
      }
    }
    epoch_loss /= static_cast<double>(order.size());
    out.report.epochs_run = epoch + 1;
  }
  out.report.final_loss = epoch_loss;
  out.report.train_accuracy = accuracy(model, train);
  out.report.validation_accuracy = validation.empty() ? 0.0 : accuracy(model, validation);
  return out;
}

void save_classifier(const std::filesystem::path& path, const ClassifierModel& model) {
  ModelFile file;
  file.kind = "classifier";
  const ClassifierArch& a = model.arch();
  file.set("n_classes", static_cast<long long>(a.n_classes));
  file.set("n_mel", static_cast<long long>(a.n_mel));
  file.set("channels", std::vector<std::string>{std::to_string(a.channels[0]),
                                                std::to_string(a.channels[1]),
                                                std::to_string(a.channels[2]),
                                                std::to_string(a.channels[3])});
  file.set("dense_hidden", static_cast<long long>(a.dense_hidden));
  file.set("input_norm", std::vector<std::string>{format_double(model.input_shift()),
                                                  format_double(model.input_scale())});
  file.values = model.params();
  write_model_file(path, file);
}

ClassifierModel load_classifier(const std::filesystem::path& path) {
  const ModelFile file = read_model_file(path, "classifier");
  ClassifierArch a;
  a.n_classes = static_cast<int>(file.get_int("n_classes"));
  a.n_mel = static_cast<int>(file.get_int("n_mel"));
  for (std::size_t i = 0; i < 4; ++i) {
    a.channels[i] = static_cast<int>(file.get_int("channels", i));
  }
  a.dense_hidden = static_cast<int>(file.get_int("dense_hidden"));
  ClassifierModel m(a);
  if (file.values.size() != m.param_count()) {
    throw std::runtime_error(path.string() + ": parameter count " +
                             std::to_string(file.values.size()) + " does not match architecture (" +
                             std::to_string(m.param_count()) + ")");
  }
  m.params() = file.values;
  m.set_input_normalization(file.get_double("input_norm", 0), file.get_double("input_norm", 1));
  return m;
}

}  // namespace soundsieve
