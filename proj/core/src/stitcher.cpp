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

#include "narrate/stitcher.hpp"

#include <cmath>

#include "narrate/error.hpp"
#include "narrate/process.hpp"
#include "narrate/synth.hpp"

namespace narrate {
namespace {

std::string replace_all(std::string text, std::string_view from, const std::string& to) {
  for (std::size_t pos = 0; (pos = text.find(from, pos)) != std::string::npos; pos += to.size()) {
    text.replace(pos, from.size(), to);
  }
  return text;
}

}  // namespace

void StitchParams::validate() const {
  if (!(fade_ms >= 0.0) || !(delta_s >= 0.0) || !std::isfinite(fade_ms) || !std::isfinite(delta_s)) {
    throw Error(ErrorCode::InvalidConfig, "fade and silence lengths must be finite and non-negative");
  }
  if (sample_rate <= 0) throw Error(ErrorCode::InvalidConfig, "sample rate must be positive");
}

std::size_t StitchParams::fade_samples() const {
  return static_cast<std::size_t>(std::llround(fade_ms * sample_rate / 1000.0));
}

std::size_t StitchParams::pad_samples() const {
  return static_cast<std::size_t>(std::llround(delta_s * sample_rate));
}

Waveform fade_out(const Waveform& w, double fade_ms) {
  Waveform out = w;
  const auto window = static_cast<std::size_t>(std::llround(fade_ms * w.sample_rate / 1000.0));
  const std::size_t m = std::min(window, out.size());
  const std::size_t first = out.size() - m;
  for (std::size_t i = 0; i < m; ++i) {
    const double gain = static_cast<double>(m - 1 - i) / static_cast<double>(m);
    out.samples[first + i] = static_cast<float>(out.samples[first + i] * gain);
  }
  return out;
}

StitchedChapter stitch(std::span<const Waveform> units, const StitchParams& params) {
  params.validate();
  StitchedChapter out;
  out.audio.sample_rate = params.sample_rate;
  out.pad_samples = params.pad_samples();
  out.delta_s = static_cast<double>(out.pad_samples) / params.sample_rate;
  std::size_t total = 0;
  for (const auto& w : units) {
    if (w.sample_rate != params.sample_rate) {
      throw Error(ErrorCode::RateMismatch, "unit at " + std::to_string(w.sample_rate) +
                                               " Hz cannot join a " +
                                               std::to_string(params.sample_rate) + " Hz stream");
    }
    total += w.size() + out.pad_samples;
  }
  out.audio.samples.reserve(total);
  for (const auto& w : units) {
    const Waveform faded = fade_out(w, params.fade_ms);
    out.audio.samples.insert(out.audio.samples.end(), faded.samples.begin(), faded.samples.end());
    out.audio.samples.insert(out.audio.samples.end(), out.pad_samples, 0.0f);
    out.unit_samples.push_back(w.size());
    out.unit_durations.push_back(static_cast<double>(w.size()) / params.sample_rate);
  }
  return out;
}

StitchedChapter stitch(std::span<const SynthUnit> units, const StitchParams& params) {
  std::vector<Waveform> waves;
  waves.reserve(units.size());
  for (const auto& u : units) waves.push_back(u.waveform);
  return stitch(std::span<const Waveform>(waves), params);
}

EncodedAudio encode_chapter_audio(const Waveform& w, const std::filesystem::path& stem,
                                  const std::optional<std::string>& encoder_cmd,
                                  const std::string& chapter_label) {
  std::filesystem::path wav = stem;
  wav += ".wav";
  write_wav(w, wav.string());
  if (!encoder_cmd || encoder_cmd->empty()) return {wav, "audio/wav", ".wav"};

  std::filesystem::path mp3 = stem;
  mp3 += ".mp3";
  std::error_code ec;
  std::filesystem::remove(mp3, ec);
  std::string command = replace_all(*encoder_cmd, "{in}", shell_quote(wav.string()));
  command = replace_all(std::move(command), "{out}", shell_quote(mp3.string()));
  int status = -1;
  try {
    status = run_shell(command);
  } catch (const Error& e) {
    throw Error(ErrorCode::EncoderFailure, chapter_label + ": " + e.what());
  }
  if (status != 0) {
    throw Error(ErrorCode::EncoderFailure,
                chapter_label + ": encoder exited with status " + std::to_string(status));
  }
  if (!std::filesystem::exists(mp3)) {
    throw Error(ErrorCode::EncoderFailure, chapter_label + ": encoder produced no " + mp3.string());
  }
  return {mp3, "audio/mpeg", ".mp3"};
}

}  // namespace narrate
