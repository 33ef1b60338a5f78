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

#include <Eigen/Core>

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace soundsieve {

/// Row-major so that one row is one time frame.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline constexpr int kSampleRate = 5000;
inline constexpr int kSegmentMs = 100;
inline constexpr int kWindowMs = 50;
inline constexpr int kHopMs = 25;
inline constexpr int kFramesPerSegment = kSegmentMs / kHopMs;
inline constexpr int kDefaultMelBins = 32;
inline constexpr double kMelMaxHz = 2500.0;

struct AudioClip {
  int sample_rate = kSampleRate;
  std::vector<double> samples;
  std::optional<int> label;
  std::string clip_id;

  double duration_ms() const {
    return 1000.0 * static_cast<double>(samples.size()) / sample_rate;
  }

  /// Throws std::invalid_argument when the clip violates its invariants
  /// (positive rate, non-empty, finite samples).
  void validate() const;
};

/// Non-negative time-frequency magnitudes, one row per 25 ms hop.
struct Spectrogram {
  Matrix frames;

  int n_frames() const { return static_cast<int>(frames.rows()); }
  int n_bins() const { return static_cast<int>(frames.cols()); }
};

/// Partition of frames into 100 ms segments. A frame belongs to the segment
/// containing its window start, so segment s owns frames [4s, 4s + 4).
class SegmentView {
public:
  SegmentView() = default;

  /// Builds the view for a spectrogram with `n_frames` rows.
  static SegmentView for_frames(int n_frames);

  int n_segments() const { return n_segments_; }
  int n_frames() const { return n_frames_; }
  int first_frame(int segment) const { return segment * kFramesPerSegment; }
  int frame_count(int segment) const;
  int segment_of_frame(int frame) const { return frame / kFramesPerSegment; }

private:
  int n_frames_ = 0;
  int n_segments_ = 0;
};

/// 1x4 frequency-axis filter shared by the sampler features and the first
/// classifier layer.
struct FrequencyFilter {
  std::array<double, 4> taps{};
  double bias = 0.0;
};

using FeatureVector = std::vector<double>;

/// Linear resampling to `target_rate`; output length is round(n * target / rate).
std::vector<double> resample_linear(const std::vector<double>& samples, int rate, int target_rate);

/// Drops the trailing partial segment, if any.
AudioClip trim_to_segments(const AudioClip& clip);

/// Hann-windowed magnitude STFT (50 ms window, 25 ms hop, zero padded to a
/// power of two). Throws if the clip is shorter than one window.
Spectrogram stft(const AudioClip& clip);

/// FFT length used by stft() for a given sample rate.
int fft_size_for(int sample_rate);

/// Triangular mel filterbank on [0, 2500] Hz, shape [n_mel x n_bins].
Matrix mel_filterbank(int n_mel, int n_bins, int sample_rate);

/// Applies the mel filterbank per frame followed by log(1 + x).
Spectrogram mel_project(const Spectrogram& spec, int n_mel = kDefaultMelBins,
                        int sample_rate = kSampleRate);

/// One valid 1x4 convolution per segment, flattened as (frame, bin).
std::vector<FeatureVector> segment_features(const Spectrogram& spec, const SegmentView& view,
                                            const FrequencyFilter& filter);

/// Feature vector of a single segment.
FeatureVector segment_feature(const Spectrogram& spec, const SegmentView& view, int segment,
                              const FrequencyFilter& filter);

/// Mel spectrogram plus its segment view, the form every downstream module uses.
struct AnalyzedClip {
  std::string clip_id;
  std::optional<int> label;
  Spectrogram mel;
  SegmentView view;

  int n_segments() const { return view.n_segments(); }
};

/// trim_to_segments -> stft -> mel_project -> SegmentView.
AnalyzedClip analyze(const AudioClip& clip, int n_mel = kDefaultMelBins);

/// Reads a 16-bit PCM mono RIFF/WAVE file and resamples it to 5 kHz.
AudioClip load_wav(const std::filesystem::path& path);

/// Writes 16-bit PCM mono at the clip's sample rate. Samples are clipped to [-1, 1).
void write_wav(const std::filesystem::path& path, const AudioClip& clip);

/// Debug dump: one frame per line, comma separated.
void write_spectrogram_csv(const std::filesystem::path& path, const Spectrogram& spec);

}  // namespace soundsieve
