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

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace soundsieve {

/// Analyzed clips split into train and test.
struct Corpus {
  std::string name;
  std::vector<std::string> class_names;
  std::vector<AnalyzedClip> train;
  std::vector<AnalyzedClip> test;
};

struct LabeledAudio {
  std::vector<std::string> class_names;
  std::vector<AudioClip> clips;
};

/// Reads `root/<class>/*.wav`. Classes are the sorted subdirectory names;
/// clip ids are "<class>/<file stem>". Files are visited in sorted order.
LabeledAudio load_wav_directory(const std::filesystem::path& root);

/// Writes clips as `root/<class>/<index>.wav`.
void write_wav_directory(const std::filesystem::path& root, const LabeledAudio& audio);

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Per-class shuffle; round(test_fraction * class size) clips of each class go
/// to the test split. Both index lists come back in ascending order.
SplitIndices stratified_split(const std::vector<AudioClip>& clips, double test_fraction,
                              std::uint64_t seed);

/// Analyzes every clip and applies stratified_split.
Corpus build_corpus(std::string name, const LabeledAudio& audio, double test_fraction,
                    std::uint64_t seed);

}  // namespace soundsieve
