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

#include "narrate/engine.hpp"

#include <cmath>
#include <numbers>

#include "json.hpp"

#include "narrate/container.hpp"
#include "narrate/error.hpp"
#include "narrate/utf8.hpp"

namespace narrate {

std::size_t MockEngine::samples_for(std::size_t characters) {
  // max(0.4 s, 0.06 s * n) at 24 kHz, in exact integer samples.
  return std::max<std::size_t>(9600, 1440 * characters);
}

Waveform MockEngine::synthesize(const SynthRequest& request) {
  if (utf8::is_blank(request.text)) {
    throw Error(ErrorCode::InvalidConfig, "synthesis request with blank text");
  }
  const std::size_t chars = utf8::count(request.text);
  if (overflow_probe_ && chars > *overflow_probe_) {
    throw Error(ErrorCode::Overflow, "token_overflow: " + std::to_string(chars) +
                                         " characters exceed the probe of " +
                                         std::to_string(*overflow_probe_));
  }
  Waveform w;
  w.sample_rate = kSampleRate;
  w.samples.resize(samples_for(chars));
  const double step = 2.0 * std::numbers::pi * 440.0 / kSampleRate;
  for (std::size_t i = 0; i < w.samples.size(); ++i) {
    w.samples[i] = static_cast<float>(0.2 * std::sin(step * static_cast<double>(i)));
  }
  return w;
}

SubprocessEngine::SubprocessEngine(Options options) : options_(std::move(options)) { start(); }

SubprocessEngine::~SubprocessEngine() = default;

void SubprocessEngine::fail(const std::string& why) {
  // The stream may be out of step with our ids; start over next time.
  process_.reset();
  throw Error(ErrorCode::EngineFailure, "TTS bridge: " + why);
}

void SubprocessEngine::start() {
  EnvironmentOverrides env;
  if (options_.gpu) env.emplace_back("TTS_USE_GPU", "1");
  process_ = std::make_unique<Subprocess>(options_.command, env);
  const auto line = process_->read_line();
  if (!line) fail("exited before the ready handshake");
  nlohmann::json hello;
  try {
    hello = nlohmann::json::parse(*line);
  } catch (const nlohmann::json::exception&) {
    fail("malformed handshake: " + *line);
  }
  if (!hello.is_object() || hello.value("ready", false) != true || !hello.contains("sample_rate") ||
      !hello["sample_rate"].is_number_integer() || hello["sample_rate"].get<long>() <= 0) {
    fail("handshake must be {\"ready\": true, \"sample_rate\": N}, got " + *line);
  }
  sample_rate_ = hello["sample_rate"].get<int>();
}

Waveform SubprocessEngine::synthesize(const SynthRequest& request) {
  if (!process_) start();
  const long id = next_id_++;
  const nlohmann::json req = {{"id", id},
                              {"text", request.text},
                              {"language", request.language},
                              {"voice", request.voice_ref}};
  if (!process_->write_line(req.dump())) fail("stopped accepting requests");
  const auto line = process_->read_line();
  if (!line) fail("exited while handling request " + std::to_string(id));

  nlohmann::json reply;
  try {
    reply = nlohmann::json::parse(*line);
  } catch (const nlohmann::json::exception&) {
    fail("malformed reply: " + *line);
  }
  if (!reply.is_object() || !reply.contains("id") || !reply["id"].is_number_integer()) {
    fail("reply without an integer id: " + *line);
  }
  if (reply["id"].get<long>() != id) {
    fail("reply id " + std::to_string(reply["id"].get<long>()) + " does not match request " +
         std::to_string(id));
  }
  if (reply.contains("error")) {
    const std::string kind = reply["error"].is_string() ? reply["error"].get<std::string>() : "";
    const std::string detail =
        reply.contains("detail") && reply["detail"].is_string() ? reply["detail"].get<std::string>() : "";
    if (kind == "token_overflow") {
      throw Error(ErrorCode::Overflow, "token_overflow" + (detail.empty() ? "" : ": " + detail));
    }
    throw Error(ErrorCode::EngineFailure, "engine_error" + (detail.empty() ? "" : ": " + detail));
  }
  if (!reply.contains("wav") || !reply["wav"].is_string()) fail("reply without wav path: " + *line);
  const std::string path = reply["wav"].get<std::string>();
  try {
    return decode_wav(read_file(path));
  } catch (const Error& e) {
    throw Error(ErrorCode::EngineFailure, "TTS bridge output " + path + ": " + e.what());
  }
}

}  // namespace narrate
