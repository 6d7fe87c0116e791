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

#include "narrate/synth.hpp"

#include <cstdlib>

#include "narrate/error.hpp"
#include "narrate/utf8.hpp"

namespace narrate {
namespace {

void split_recursive(TextPiece piece, std::size_t lambda_plus, std::vector<TextPiece>& out) {
  const std::size_t n = utf8::count(piece.text);
  if (n <= lambda_plus) {
    out.push_back(std::move(piece));
    return;
  }
  if (auto halves = split_at_median(piece)) {
    split_recursive(std::move(halves->first), lambda_plus, out);
    split_recursive(std::move(halves->second), lambda_plus, out);
    return;
  }
  const std::size_t cut = utf8::offset_of(piece.text, lambda_plus);
  out.push_back({piece.text.substr(0, cut), std::move(piece.separator)});
  split_recursive({piece.text.substr(cut), std::string()}, lambda_plus, out);
}

bool same_block(const SentenceSeg& a, const SentenceSeg& b) { return a.block == b.block; }

}  // namespace

void EngineLimits::validate() const {
  if (lambda_minus == 0 || lambda_minus >= lambda_plus) {
    throw Error(ErrorCode::InvalidConfig, "engine limits need 0 < min-chars < max-chars, got " +
                                              std::to_string(lambda_minus) + " and " +
                                              std::to_string(lambda_plus));
  }
}

std::string join_pieces(std::span<const TextPiece> pieces) {
  std::string out;
  for (const auto& p : pieces) {
    out += p.separator;
    out += p.text;
  }
  return out;
}

std::optional<std::pair<TextPiece, TextPiece>> split_at_median(const TextPiece& piece) {
  const std::string& text = piece.text;
  const std::size_t n = utf8::count(text);
  if (n < 3) return std::nullopt;
  const std::size_t mid = n / 2;
  std::size_t best_byte = std::string::npos;
  std::size_t best_len = 0;
  std::size_t best_distance = std::string::npos;
  std::size_t index = 0;
  for (std::size_t pos = 0; pos < text.size(); ++index) {
    const utf8::Decoded d = utf8::decode(text, pos);
    if (index >= 1 && index + 2 <= n && utf8::is_space(d.cp)) {
      const std::size_t distance = index > mid ? index - mid : mid - index;
      if (distance < best_distance) {
        best_distance = distance;
        best_byte = pos;
        best_len = d.length;
      }
    }
    pos += d.length;
  }
  if (best_byte == std::string::npos) return std::nullopt;
  return std::make_pair(TextPiece{text.substr(0, best_byte), piece.separator},
                        TextPiece{text.substr(best_byte + best_len), text.substr(best_byte, best_len)});
}

std::vector<TextPiece> split_text(std::string_view text, std::size_t lambda_plus) {
  std::vector<TextPiece> out;
  split_recursive({std::string(text), std::string()}, std::max<std::size_t>(lambda_plus, 1), out);
  return out;
}

std::vector<UnitPlan> plan_units(std::span<const SentenceSeg> segs, const EngineLimits& limits) {
  std::vector<UnitPlan> plans;
  for (std::size_t i = 0; i < segs.size();) {
    UnitPlan plan;
    plan.first_seg = i;
    plan.anchor_ids.push_back(segs[i].anchor_id);
    plan.tts_text = segs[i].tts_text;
    std::size_t j = i + 1;
    while (utf8::count(plan.tts_text) < limits.lambda_minus && j < segs.size() &&
           same_block(segs[j - 1], segs[j])) {
      plan.tts_text += ' ';
      plan.tts_text += segs[j].tts_text;
      plan.anchor_ids.push_back(segs[j].anchor_id);
      ++j;
    }
    plan.pieces = split_text(plan.tts_text, limits.lambda_plus);
    plans.push_back(std::move(plan));
    i = j;
  }
  return plans;
}

namespace {

class UnitSynthesizer {
 public:
  UnitSynthesizer(const UnitPlan& plan, SpeechEngine& engine, const SynthOptions& options,
                  SynthUnit& out)
      : plan_(plan), engine_(engine), options_(options), out_(out) {}

  void run(const TextPiece& piece, int depth) {
    Waveform w;
    for (int attempt = 0;; ++attempt) {
      try {
        w = engine_.synthesize({piece.text, options_.language, options_.voice_ref});
        break;
      } catch (const Error& e) {
        if (e.code() == ErrorCode::Overflow) {
          split_and_retry(piece, depth, e);
          return;
        }
        if (e.code() != ErrorCode::EngineFailure) throw;
        if (attempt >= options_.engine_retries) {
          throw Error(ErrorCode::EngineFailure,
                      context() + ": " + e.what() + " (after " + std::to_string(attempt + 1) + " attempts)");
        }
      }
    }
    if (w.sample_rate != engine_.sample_rate()) w = resample_linear(w, engine_.sample_rate());
    out_.pieces.push_back(piece);
    out_.piece_samples.push_back(w.size());
    out_.waveform.samples.insert(out_.waveform.samples.end(), w.samples.begin(), w.samples.end());
  }

 private:
  void split_and_retry(const TextPiece& piece, int depth, const Error& cause) {
    if (depth >= options_.max_split_depth) {
      throw Error(ErrorCode::UnsplittableOverflow,
                  context() + ": overflow persists after " + std::to_string(depth) +
                      " splits on \"" + piece.text + "\": " + cause.what());
    }
    auto halves = split_at_median(piece);
    if (!halves) {
      throw Error(ErrorCode::UnsplittableOverflow,
                  context() + ": cannot split \"" + piece.text + "\" any further: " + cause.what());
    }
    run(halves->first, depth + 1);
    run(halves->second, depth + 1);
  }

  std::string context() const {
    return "anchor " + (plan_.anchor_ids.empty() ? std::string("?") : plan_.anchor_ids.front());
  }

  const UnitPlan& plan_;
  SpeechEngine& engine_;
  const SynthOptions& options_;
  SynthUnit& out_;
};

}  // namespace

SynthUnit synthesize_unit(const UnitPlan& plan, SpeechEngine& engine, const SynthOptions& options) {
  SynthUnit unit;
  unit.plan = plan;
  unit.waveform.sample_rate = engine.sample_rate();
  UnitSynthesizer synth(plan, engine, options, unit);
  for (const auto& piece : plan.pieces) synth.run(piece, 0);
  return unit;
}

}  // namespace narrate
