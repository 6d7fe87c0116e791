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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "narrate/engine.hpp"
#include "narrate/segmenter.hpp"
#include "narrate/waveform.hpp"

namespace narrate {

struct EngineLimits {
  std::size_t lambda_plus = 200;  // longest piece sent to the engine, in characters
  std::size_t lambda_minus = 60;  // shorter units absorb their same-block successors
  std::optional<std::size_t> hard_token_probe;  // mock engine overflow threshold

  // Throws InvalidConfig unless 0 < lambda_minus < lambda_plus.
  void validate() const;
};

// A fragment of a unit's text. `separator` is the whitespace removed between
// this piece and the previous one (empty for the first piece and for hard
// splits), so joining reproduces the source exactly.
struct TextPiece {
  std::string text;
  std::string separator;

  friend bool operator==(const TextPiece&, const TextPiece&) = default;
};

std::string join_pieces(std::span<const TextPiece> pieces);

// Recursive median split: texts longer than `lambda_plus` characters are cut
// at the whitespace nearest their midpoint (earlier one on ties); texts with
// no usable whitespace are cut hard every `lambda_plus` characters.
std::vector<TextPiece> split_text(std::string_view text, std::size_t lambda_plus);

// One split at the whitespace nearest the midpoint, if there is any.
std::optional<std::pair<TextPiece, TextPiece>> split_at_median(const TextPiece& piece);

struct UnitPlan {
  std::vector<std::string> anchor_ids;  // covered sentences, first one heads the unit
  std::size_t first_seg = 0;            // index into the chapter's segments
  std::string tts_text;
  std::vector<TextPiece> pieces;
};

// Greedy left-to-right merge of short sentences within a block, then
// pre-emptive splitting of every unit longer than lambda_plus.
std::vector<UnitPlan> plan_units(std::span<const SentenceSeg> segs, const EngineLimits& limits);

struct SynthUnit {
  UnitPlan plan;
  std::vector<TextPiece> pieces;           // as finally synthesized
  std::vector<std::size_t> piece_samples;  // per piece, at waveform.sample_rate
  Waveform waveform;
};

struct SynthOptions {
  std::string language = "en";
  std::string voice_ref;
  int engine_retries = 2;   // extra attempts after a non-overflow failure
  int max_split_depth = 8;  // reactive splits per piece
};

// Synthesizes every piece, splitting pieces in two whenever the engine
// overflows, and concatenates the results at the engine's sample rate.
SynthUnit synthesize_unit(const UnitPlan& plan, SpeechEngine& engine, const SynthOptions& options);

}  // namespace narrate
