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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "narrate/waveform.hpp"

namespace narrate {

struct SynthUnit;

struct StitchParams {
  double fade_ms = 50.0;  // linear fade at the end of every unit
  double delta_s = 0.15;  // silence appended after every unit
  int sample_rate = 24000;

  void validate() const;
  std::size_t fade_samples() const;
  std::size_t pad_samples() const;  // delta_s rounded to whole samples
};

// The chapter stream (w'_1 | delta) | (w'_2 | delta) | ... with the exact
// sample bookkeeping needed to timestamp it.
struct StitchedChapter {
  Waveform audio;
  std::vector<std::size_t> unit_samples;  // per unit, before padding
  std::size_t pad_samples = 0;
  std::vector<double> unit_durations;  // unit_samples / rate
  double delta_s = 0.0;                // pad_samples / rate
};

// Multiplies the last min(fade, n) samples by (m-1-i)/m, ending at gain 0.
Waveform fade_out(const Waveform& w, double fade_ms);

// Throws RateMismatch when a waveform is not at params.sample_rate.
StitchedChapter stitch(std::span<const Waveform> units, const StitchParams& params);
StitchedChapter stitch(std::span<const SynthUnit> units, const StitchParams& params);

struct EncodedAudio {
  std::filesystem::path path;
  std::string media_type;  // "audio/wav" or "audio/mpeg"
  std::string extension;   // ".wav" or ".mp3"
};

// Writes `w` next to `stem` (a path without extension). With an encoder
// command template ({in} and {out} are replaced by quoted paths) the WAV is
// converted to MP3; otherwise the WAV itself is the result.
EncodedAudio encode_chapter_audio(const Waveform& w, const std::filesystem::path& stem,
                                  const std::optional<std::string>& encoder_cmd,
                                  const std::string& chapter_label);

}  // namespace narrate
