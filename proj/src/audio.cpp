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

#include "soundsieve/audio.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace soundsieve {

namespace {

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

int samples_for_ms(int sample_rate, int ms) {
  return static_cast<int>(std::lround(static_cast<double>(sample_rate) * ms / 1000.0));
}

}  // namespace

void AudioClip::validate() const {
  if (sample_rate <= 0) {
    throw std::invalid_argument("clip '" + clip_id + "': sample rate must be positive");
  }
  if (samples.empty()) {
    throw std::invalid_argument("clip '" + clip_id + "': no samples");
  }
  for (double s : samples) {
    if (!std::isfinite(s)) {
      throw std::invalid_argument("clip '" + clip_id + "': non-finite sample");
    }
  }
}

SegmentView SegmentView::for_frames(int n_frames) {
  if (n_frames < 0) {
    throw std::invalid_argument("negative frame count");
  }
  SegmentView view;
  view.n_frames_ = n_frames;
  view.n_segments_ = (n_frames + kFramesPerSegment - 1) / kFramesPerSegment;
  return view;
}

int SegmentView::frame_count(int segment) const {
  if (segment < 0 || segment >= n_segments_) {
    throw std::out_of_range("segment index out of range");
  }
  return std::min(kFramesPerSegment, n_frames_ - first_frame(segment));
}

std::vector<double> resample_linear(const std::vector<double>& samples, int rate,
                                    int target_rate) {
  if (rate <= 0 || target_rate <= 0) {
    throw std::invalid_argument("sample rates must be positive");
  }
  if (rate == target_rate || samples.empty()) {
    return samples;
  }
  const auto n = samples.size();
  const auto n_out = static_cast<std::size_t>(
      std::llround(static_cast<double>(n) * target_rate / static_cast<double>(rate)));
  std::vector<double> out(n_out);
  const double step = static_cast<double>(rate) / target_rate;
  for (std::size_t j = 0; j < n_out; ++j) {
    const double pos = static_cast<double>(j) * step;
    const auto i0 = static_cast<std::size_t>(pos);
    if (i0 + 1 >= n) {
      out[j] = samples[n - 1];
      continue;
    }
    const double frac = pos - static_cast<double>(i0);
    out[j] = (1.0 - frac) * samples[i0] + frac * samples[i0 + 1];
  }
  return out;
}

AudioClip trim_to_segments(const AudioClip& clip) {
  const int seg_samples = samples_for_ms(clip.sample_rate, kSegmentMs);
  AudioClip out = clip;
  const std::size_t keep = (clip.samples.size() / seg_samples) * seg_samples;
  out.samples.resize(keep);
  return out;
}

int fft_size_for(int sample_rate) {
  const int window = samples_for_ms(sample_rate, kWindowMs);
  int n = 1;
  while (n < window) {
    n <<= 1;
  }
  return n;
}

Spectrogram stft(const AudioClip& clip) {
  clip.validate();
  const int window = samples_for_ms(clip.sample_rate, kWindowMs);
  const int hop = samples_for_ms(clip.sample_rate, kHopMs);
  const int n_fft = fft_size_for(clip.sample_rate);
  const int n_samples = static_cast<int>(clip.samples.size());
  if (n_samples < window) {
    throw std::invalid_argument("clip '" + clip.clip_id + "' is shorter than one 50 ms window");
  }
  const int n_frames = (n_samples - window) / hop + 1;
  const int n_bins = n_fft / 2 + 1;

  std::vector<double> hann(window);
  for (int i = 0; i < window; ++i) {
    hann[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * i / window));
  }

  Eigen::FFT<double> fft;
  std::vector<double> buf(n_fft, 0.0);
  std::vector<std::complex<double>> spectrum;
  Spectrogram spec;
  spec.frames.resize(n_frames, n_bins);
  for (int f = 0; f < n_frames; ++f) {
    const int start = f * hop;
    std::fill(buf.begin(), buf.end(), 0.0);
    for (int i = 0; i < window; ++i) {
      buf[i] = clip.samples[start + i] * hann[i];
    }
    fft.fwd(spectrum, buf);
    for (int k = 0; k < n_bins; ++k) {
      spec.frames(f, k) = std::abs(spectrum[k]);
    }
  }
  return spec;
}

Matrix mel_filterbank(int n_mel, int n_bins, int sample_rate) {
  if (n_mel < 1) {
    throw std::invalid_argument("n_mel must be at least 1");
  }
  if (n_mel > n_bins) {
    throw std::invalid_argument("n_mel must not exceed the number of spectral bins");
  }
  const int n_fft = 2 * (n_bins - 1);
  const double mel_max = hz_to_mel(std::min(kMelMaxHz, sample_rate / 2.0));
  std::vector<double> edges(n_mel + 2);
  for (int m = 0; m < n_mel + 2; ++m) {
    edges[m] = mel_to_hz(mel_max * m / (n_mel + 1));
  }
  Matrix bank = Matrix::Zero(n_mel, n_bins);
  for (int m = 0; m < n_mel; ++m) {
    const double lo = edges[m];
    const double mid = edges[m + 1];
    const double hi = edges[m + 2];
    for (int k = 0; k < n_bins; ++k) {
      const double hz = static_cast<double>(k) * sample_rate / n_fft;
      double w = 0.0;
      if (hz > lo && hz <= mid) {
        w = (hz - lo) / (mid - lo);
      } else if (hz > mid && hz < hi) {
        w = (hi - hz) / (hi - mid);
      }
      bank(m, k) = w;
    }
  }
  return bank;
}

Spectrogram mel_project(const Spectrogram& spec, int n_mel, int sample_rate) {
  const Matrix bank = mel_filterbank(n_mel, spec.n_bins(), sample_rate);
  Spectrogram out;
  out.frames = (spec.frames * bank.transpose()).array().log1p().matrix();
  return out;
}

FeatureVector segment_feature(const Spectrogram& spec, const SegmentView& view, int segment,
                              const FrequencyFilter& filter) {
  if (view.n_frames() != spec.n_frames()) {
    throw std::invalid_argument("segment view does not match spectrogram");
  }
  const int width = spec.n_bins() - 3;
  if (width < 1) {
    throw std::invalid_argument("spectrogram needs at least 4 bins for the 1x4 filter");
  }
  const int first = view.first_frame(segment);
  const int count = view.frame_count(segment);
  FeatureVector out;
  out.reserve(static_cast<std::size_t>(count) * width);
  for (int f = first; f < first + count; ++f) {
    for (int j = 0; j < width; ++j) {
      double acc = filter.bias;
      for (int k = 0; k < 4; ++k) {
        acc += filter.taps[k] * spec.frames(f, j + k);
      }
      out.push_back(acc);
    }
  }
  return out;
}

std::vector<FeatureVector> segment_features(const Spectrogram& spec, const SegmentView& view,
                                            const FrequencyFilter& filter) {
  std::vector<FeatureVector> out;
  out.reserve(view.n_segments());
  for (int s = 0; s < view.n_segments(); ++s) {
    out.push_back(segment_feature(spec, view, s, filter));
  }
  return out;
}

AnalyzedClip analyze(const AudioClip& clip, int n_mel) {
  const AudioClip trimmed = trim_to_segments(clip);
  AnalyzedClip out;
  out.clip_id = clip.clip_id;
  out.label = clip.label;
  out.mel = mel_project(stft(trimmed), n_mel, trimmed.sample_rate);
  out.view = SegmentView::for_frames(out.mel.n_frames());
  return out;
}

void write_spectrogram_csv(const std::filesystem::path& path, const Spectrogram& spec) {
  std::ofstream os(path);
  if (!os) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  os.precision(10);
  for (int f = 0; f < spec.n_frames(); ++f) {
    for (int k = 0; k < spec.n_bins(); ++k) {
      if (k > 0) {
        os << ',';
      }
      os << spec.frames(f, k);
    }
    os << '\n';
  }
}

}  // namespace soundsieve
