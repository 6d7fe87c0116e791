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

#include "narrate/waveform.hpp"

#include <cmath>
#include <stdexcept>

#include "narrate/error.hpp"

namespace narrate {

Waveform resample_linear(const Waveform& in, int target_rate) {
  if (target_rate <= 0 || in.sample_rate <= 0) {
    throw Error(ErrorCode::InvalidConfig, "sample rates must be positive");
  }
  if (in.sample_rate == target_rate) return in;
  Waveform out;
  out.sample_rate = target_rate;
  const double ratio = static_cast<double>(in.sample_rate) / static_cast<double>(target_rate);
  const auto n_out = static_cast<std::size_t>(
      std::llround(static_cast<double>(in.size()) / ratio));
  out.samples.resize(n_out);
  if (in.empty()) return out;
  const std::size_t last = in.size() - 1;
  for (std::size_t i = 0; i < n_out; ++i) {
    const double pos = static_cast<double>(i) * ratio;
    const auto j = std::min(static_cast<std::size_t>(pos), last);
    const double frac = pos - static_cast<double>(j);
    const float a = in.samples[j];
    const float b = in.samples[std::min(j + 1, last)];
    out.samples[i] = static_cast<float>(a + (b - a) * frac);
  }
  return out;
}

}  // namespace narrate
