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

#include "soundsieve/dataset.hpp"

#include "soundsieve/random.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

namespace soundsieve {

namespace fs = std::filesystem;

LabeledAudio load_wav_directory(const fs::path& root) {
  if (!fs::is_directory(root)) {
    throw std::runtime_error(root.string() + " is not a directory");
  }
  LabeledAudio out;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory()) {
      out.class_names.push_back(entry.path().filename().string());
    }
  }
  std::sort(out.class_names.begin(), out.class_names.end());
  for (std::size_t k = 0; k < out.class_names.size(); ++k) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(root / out.class_names[k])) {
      std::string ext = entry.path().extension().string();
      std::transform(ext.begin(), ext.end(), ext.begin(),
                     [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
      if (entry.is_regular_file() && ext == ".wav") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      AudioClip clip = load_wav(f);
      clip.label = static_cast<int>(k);
      clip.clip_id = out.class_names[k] + "/" + f.stem().string();
      out.clips.push_back(std::move(clip));
    }
  }
  if (out.clips.empty()) {
    throw std::runtime_error(root.string() + ": no WAV files found in class subdirectories");
  }
  return out;
}

void write_wav_directory(const fs::path& root, const LabeledAudio& audio) {
  std::map<int, int> next_index;
  for (const auto& clip : audio.clips) {
    if (!clip.label || *clip.label < 0 ||
        *clip.label >= static_cast<int>(audio.class_names.size())) {
      throw std::invalid_argument("clip '" + clip.clip_id + "' has no valid label");
    }
    const fs::path dir = root / audio.class_names[static_cast<std::size_t>(*clip.label)];
    fs::create_directories(dir);
    const int idx = next_index[*clip.label]++;
    char name[32];
    std::snprintf(name, sizeof name, "%04d.wav", idx);
    write_wav(dir / name, clip);
  }
}

SplitIndices stratified_split(const std::vector<AudioClip>& clips, double test_fraction,
                              std::uint64_t seed) {
  if (test_fraction < 0.0 || test_fraction >= 1.0) {
    throw std::invalid_argument("test fraction must lie in [0, 1)");
  }
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < clips.size(); ++i) {
    if (!clips[i].label) {
      throw std::invalid_argument("clip '" + clips[i].clip_id + "' has no label");
    }
    by_class[*clips[i].label].push_back(i);
  }
  SplitIndices split;
  for (auto& [label, idx] : by_class) {
    Rng rng(Rng::mix(seed, static_cast<std::uint64_t>(label)));
    rng.shuffle(idx);
    const auto n_test =
        static_cast<std::size_t>(std::lround(test_fraction * static_cast<double>(idx.size())));
    split.test.insert(split.test.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_test));
    split.train.insert(split.train.end(), idx.begin() + static_cast<std::ptrdiff_t>(n_test), idx.end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

Corpus build_corpus(std::string name, const LabeledAudio& audio, double test_fraction,
                    std::uint64_t seed) {
  Corpus corpus;
  corpus.name = std::move(name);
  corpus.class_names = audio.class_names;
  const SplitIndices split = stratified_split(audio.clips, test_fraction, seed);
  for (std::size_t i : split.train) {
    corpus.train.push_back(analyze(audio.clips[i]));
  }
  for (std::size_t i : split.test) {
    corpus.test.push_back(analyze(audio.clips[i]));
  }
  return corpus;
}

}  // namespace soundsieve
