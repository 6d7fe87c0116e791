// Copyright 2026 The narrate Authors
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

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "narrate/engine.hpp"
#include "narrate/overlay.hpp"

namespace narrate {

struct RunConfig {
  std::filesystem::path input_epub;
  std::filesystem::path output_epub;
  std::optional<std::filesystem::path> voice;
  std::string language = "en";
  std::string engine = "mock";  // "mock" or a bridge command line
  bool gpu = false;
  bool skip_audio = false;  // narrate with the mock engine whatever `engine` says
  double delta_s = 0.15;
  double fade_ms = 50.0;
  std::size_t lambda_plus = 200;
  std::size_t lambda_minus = 60;
  std::optional<std::size_t> hard_token_probe;  // mock engine only
  std::optional<std::string> encoder;           // "{in}"/"{out}" template producing MP3
  unsigned jobs = 0;                            // 0: one per logical processor

  bool uses_mock() const { return skip_audio || engine == "mock"; }
  // Throws InvalidConfig.
  void validate() const;
};

struct ChapterResult {
  std::size_t chapter_index = 0;  // spine position
  std::string xhtml_path;
  std::string smil_path;
  std::string audio_path;
  std::size_t sentences = 0;
  std::vector<std::vector<std::string>> unit_anchors;
  std::vector<std::size_t> unit_samples;
  std::size_t pad_samples = 0;
  int sample_rate = 0;
  std::vector<double> unit_durations;
  double delta_s = 0.0;
  std::vector<ClipInterval> intervals;
  double duration = 0.0;
};

struct ConvertResult {
  std::vector<ChapterResult> chapters;
  std::size_t sentences = 0;
  double total_duration = 0.0;
};

using ProgressFn = std::function<void(const std::string&)>;

// Builds the engine a worker uses for the whole run.
std::unique_ptr<SpeechEngine> make_engine(const RunConfig& config);

// Segments, narrates and repackages `input_epub` into `output_epub`. Errors
// carry the chapter (and, from synthesis, the anchor) they occurred in.
ConvertResult run_convert(const RunConfig& config, const ProgressFn& progress = {});

}  // namespace narrate
