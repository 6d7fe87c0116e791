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
#include <string>
#include <string_view>
#include <vector>

namespace narrate {

// Mono PCM in [-1, 1].
struct Waveform {
  std::vector<float> samples;
  int sample_rate = 24000;

  std::size_t size() const noexcept { return samples.size(); }
  bool empty() const noexcept { return samples.empty(); }
  double duration() const noexcept {
    return static_cast<double>(samples.size()) / static_cast<double>(sample_rate);
  }
};

// Linear-interpolation resampler. Output length is round(n * target / rate).
Waveform resample_linear(const Waveform& in, int target_rate);

// RIFF/WAVE, 16-bit signed PCM, mono. Samples are clipped to [-1, 1] and
// scaled by 32767.
std::string encode_wav(const Waveform& w);
void write_wav(const Waveform& w, const std::string& path);

// Accepts 16-bit PCM mono, which is what TTS bridges emit.
Waveform decode_wav(std::string_view bytes);

}  // namespace narrate
