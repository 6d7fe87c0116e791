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
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "narrate/process.hpp"
#include "narrate/waveform.hpp"

namespace narrate {

struct SynthRequest {
  std::string text;      // non-blank
  std::string language;  // BCP-47
  std::string voice_ref; // path to the reference sample
};

// A text-to-speech back end. Implementations throw Error with
// ErrorCode::Overflow when the input exceeds the model's context window and
// ErrorCode::EngineFailure for anything else.
class SpeechEngine {
 public:
  virtual ~SpeechEngine() = default;
  // Rate every returned waveform is resampled to before concatenation.
  virtual int sample_rate() const = 0;
  virtual Waveform synthesize(const SynthRequest& request) = 0;
};

using EngineFactory = std::function<std::unique_ptr<SpeechEngine>()>;

// Deterministic stand-in: a 440 Hz tone at amplitude 0.2 lasting
// max(0.4 s, 0.06 s per character), at 24 kHz.
class MockEngine final : public SpeechEngine {
 public:
  static constexpr int kSampleRate = 24000;

  // With a probe, inputs longer than `overflow_probe` characters overflow.
  explicit MockEngine(std::optional<std::size_t> overflow_probe = std::nullopt)
      : overflow_probe_(overflow_probe) {}

  int sample_rate() const override { return kSampleRate; }
  Waveform synthesize(const SynthRequest& request) override;

  static std::size_t samples_for(std::size_t characters);

 private:
  std::optional<std::size_t> overflow_probe_;
};

// Talks to an external bridge process over line-delimited JSON:
//   <- {"ready": true, "sample_rate": N}
//   -> {"id": 1, "text": "...", "language": "en", "voice": "v.wav"}
//   <- {"id": 1, "wav": "/tmp/u1.wav"} | {"id": 1, "error": "token_overflow", ...}
// A bridge that dies or breaks the protocol is restarted on the next request.
class SubprocessEngine final : public SpeechEngine {
 public:
  struct Options {
    std::string command;
    bool gpu = false;  // exported to the bridge as TTS_USE_GPU=1
  };

  explicit SubprocessEngine(Options options);
  ~SubprocessEngine() override;

  int sample_rate() const override { return sample_rate_; }
  Waveform synthesize(const SynthRequest& request) override;

 private:
  void start();
  [[noreturn]] void fail(const std::string& why);

  Options options_;
  std::unique_ptr<Subprocess> process_;
  int sample_rate_ = 0;
  long next_id_ = 1;
};

}  // namespace narrate
