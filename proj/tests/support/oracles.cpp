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

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace soundsieve::oracle {

std::vector<double> dft_magnitude(const std::vector<double>& x, int n_fft) {
  std::vector<double> out(static_cast<std::size_t>(n_fft / 2 + 1));
  for (int k = 0; k <= n_fft / 2; ++k) {
    double re = 0.0;
    double im = 0.0;
    for (int t = 0; t < static_cast<int>(x.size()) && t < n_fft; ++t) {
      const double a = -2.0 * std::numbers::pi * k * t / n_fft;
      re += x[static_cast<std::size_t>(t)] * std::cos(a);
      im += x[static_cast<std::size_t>(t)] * std::sin(a);
    }
    out[static_cast<std::size_t>(k)] = std::hypot(re, im);
  }
  return out;
}

Spectrogram stft(const std::vector<double>& samples, int sample_rate) {
  const int window = sample_rate * 50 / 1000;
  const int hop = sample_rate * 25 / 1000;
  int n_fft = 1;
  while (n_fft < window) {
    n_fft *= 2;
  }
  const int n_frames = (static_cast<int>(samples.size()) - window) / hop + 1;
  Spectrogram s;
  s.frames.resize(n_frames, n_fft / 2 + 1);
  for (int f = 0; f < n_frames; ++f) {
    std::vector<double> buf(static_cast<std::size_t>(window));
    for (int i = 0; i < window; ++i) {
      const double w = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / window);
      buf[static_cast<std::size_t>(i)] = w * samples[static_cast<std::size_t>(f * hop + i)];
    }
    const auto mag = dft_magnitude(buf, n_fft);
    for (int k = 0; k < static_cast<int>(mag.size()); ++k) {
      s.frames(f, k) = mag[static_cast<std::size_t>(k)];
    }
  }
  return s;
}

Matrix mel_filterbank(int n_mel, int n_bins, int sample_rate, double f_max) {
  const auto mel = [](double hz) { return 1127.0 * std::log(1.0 + hz / 700.0); };
  const auto hz = [](double m) { return 700.0 * (std::exp(m / 1127.0) - 1.0); };
  const int n_fft = 2 * (n_bins - 1);
  Matrix bank = Matrix::Zero(n_mel, n_bins);
  const double top = mel(f_max);
  for (int m = 1; m <= n_mel; ++m) {
    const double left = hz(top * (m - 1) / (n_mel + 1));
    const double centre = hz(top * m / (n_mel + 1));
    const double right = hz(top * (m + 1) / (n_mel + 1));
    for (int k = 0; k < n_bins; ++k) {
      const double f = 1.0 * k * sample_rate / n_fft;
      const double up = (f - left) / (centre - left);
      const double down = (right - f) / (right - centre);
      bank(m - 1, k) = std::max(0.0, std::min(up, down));
    }
  }
  return bank;
}

Spectrogram impute(const Spectrogram& spec, const SegmentMask& mask, const SegmentView& view) {
  const int n_frames = spec.n_frames();
  const int n_bins = spec.n_bins();
  std::vector<bool> missing(static_cast<std::size_t>(n_frames));
  bool any_observed = false;
  for (int t = 0; t < n_frames; ++t) {
    missing[static_cast<std::size_t>(t)] = !mask[t / 4];
    any_observed = any_observed || mask[t / 4];
  }
  if (!any_observed || view.n_frames() != n_frames) {
    throw std::invalid_argument("oracle: nothing to anchor or shape mismatch");
  }
  Spectrogram x = spec;
  int t = 0;
  while (t < n_frames) {
    if (!missing[static_cast<std::size_t>(t)]) {
      ++t;
      continue;
    }
    int t_s = t;
    int t_e = t;
    while (t_e + 1 < n_frames && missing[static_cast<std::size_t>(t_e + 1)]) {
      ++t_e;
    }
    t = t_e + 1;
    if (t_s == 0 || t_e == n_frames - 1) {
      const int anchor = t_s == 0 ? t_e + 1 : t_s - 1;
      for (int u = t_s; u <= t_e; ++u) {
        for (int f = 0; f < n_bins; ++f) {
          x.frames(u, f) = x.frames(anchor, f);
        }
      }
      continue;
    }
    // Step 1: r(t) = (t - (t_s - 1)) / ((t_e + 1) - (t_s - 1)).
    // Step 2: X(t, f) = (1 - r(t)) X(t_s - 1, f) + r(t) X(t_e + 1, f) for t = t_s and t = t_e.
    // Step 3: t_s += 1, t_e -= 1, repeat until the indices cross.
    while (t_s <= t_e) {
      const double r_s = static_cast<double>(t_s - (t_s - 1)) / ((t_e + 1) - (t_s - 1));
      const double r_e = static_cast<double>(t_e - (t_s - 1)) / ((t_e + 1) - (t_s - 1));
      std::vector<double> new_s(static_cast<std::size_t>(n_bins));
      std::vector<double> new_e(static_cast<std::size_t>(n_bins));
      for (int f = 0; f < n_bins; ++f) {
        new_s[static_cast<std::size_t>(f)] =
            (1.0 - r_s) * x.frames(t_s - 1, f) + r_s * x.frames(t_e + 1, f);
        new_e[static_cast<std::size_t>(f)] =
            (1.0 - r_e) * x.frames(t_s - 1, f) + r_e * x.frames(t_e + 1, f);
      }
      for (int f = 0; f < n_bins; ++f) {
        x.frames(t_s, f) = new_s[static_cast<std::size_t>(f)];
        x.frames(t_e, f) = new_e[static_cast<std::size_t>(f)];
      }
      t_s += 1;
      t_e -= 1;
    }
  }
  return x;
}

std::vector<double> weighted_ridge(const std::vector<std::vector<double>>& features,
                                   const std::vector<double>& targets,
                                   const std::vector<double>& weights, double lambda) {
  const std::size_t rows = features.size();
  const std::size_t p = features.front().size();
  const std::size_t d = p + 1;
  std::vector<std::vector<double>> a(d, std::vector<double>(d + 1, 0.0));
  for (std::size_t r = 0; r < rows; ++r) {
    std::vector<double> row = features[r];
    row.push_back(1.0);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        a[i][j] += weights[r] * row[i] * row[j];
      }
      a[i][d] += weights[r] * row[i] * targets[r];
    }
  }
  for (std::size_t i = 0; i < p; ++i) {
    a[i][i] += lambda;
  }
  for (std::size_t c = 0; c < d; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < d; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) {
        piv = r;
      }
    }
    std::swap(a[c], a[piv]);
    if (a[c][c] == 0.0) {
      throw std::runtime_error("oracle: singular system");
    }
    for (std::size_t r = 0; r < d; ++r) {
      if (r == c) {
        continue;
      }
      const double factor = a[r][c] / a[c][c];
      for (std::size_t k = c; k <= d; ++k) {
        a[r][k] -= factor * a[c][k];
      }
    }
  }
  std::vector<double> beta(d);
  for (std::size_t i = 0; i < d; ++i) {
    beta[i] = a[i][d] / a[i][i];
  }
  return beta;
}

std::vector<double> central_gradient(const std::function<double(const std::vector<double>&)>& f,
                                     std::vector<double> x, double h) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double keep = x[i];
    x[i] = keep + h;
    const double up = f(x);
    x[i] = keep - h;
    const double down = f(x);
    x[i] = keep;
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

double relative_error(const std::vector<double>& a, const std::vector<double>& b) {
  double diff = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff += (a[i] - b[i]) * (a[i] - b[i]);
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  return std::sqrt(diff) / std::max({std::sqrt(na), std::sqrt(nb), 1e-300});
}

}  // namespace soundsieve::oracle
