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

// Runs each acceptance criterion once and prints one PASS/FAIL line per
// criterion. Exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "narrate/container.hpp"
#include "narrate/drift.hpp"
#include "narrate/engine.hpp"
#include "narrate/overlay.hpp"
#include "narrate/pipeline.hpp"
#include "narrate/segmenter.hpp"
#include "narrate/stitcher.hpp"
#include "narrate/synth.hpp"
#include "narrate/utf8.hpp"
#include "narrate/xml.hpp"
#include "test_support.hpp"

namespace narrate {
namespace {

using testing::fixture;
using testing::ScratchDir;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

struct Clip {
  std::string begin;
  std::string end;
};

std::vector<Clip> clips_of(const std::string& smil) {
  std::vector<Clip> out;
  xml::Document doc = xml::parse(smil);
  doc.root().walk([&](xml::Node& n) {
    if (n.is_element() && n.local_name() == "audio") {
      out.push_back({n.attribute("clipBegin").value_or(""), n.attribute("clipEnd").value_or("")});
    }
    return true;
  });
  return out;
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) h = (h ^ c) * 1099511628211ull;
  return h;
}

RunConfig mock_config(const std::string& name, const ScratchDir& dir) {
  RunConfig c;
  c.input_epub = fixture(name);
  c.output_epub = dir / (name + ".out.epub");
  return c;
}

Verdict zero_drift_row() {
  ScratchDir dir;
  const auto t0 = std::chrono::steady_clock::now();
  const RunConfig c = mock_config("two_spine.epub", dir);
  const ConvertResult converted = run_convert(c);
  const DriftEvaluation ev = evaluate_drift(c.output_epub, c.output_epub);
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const DriftReport& r = ev.report;
  const bool zeros = r.min == 0.0 && r.p10 == 0.0 && r.mean == 0.0 && r.median == 0.0 && r.p90 == 0.0 &&
                     r.max == 0.0;
  const bool pass = converted.chapters.size() >= 2 && zeros && r.pct_acceptable == 1.0 &&
                    ev.match.match_rate == 1.0 && elapsed < 10.0;
  return {pass, std::to_string(converted.chapters.size()) + " chapters, " + std::to_string(r.n_matched) +
                    " matched, " + fmt("pct_acceptable=%.3f, %.2fs", r.pct_acceptable, elapsed)};
}

Verdict gapless() {
  ScratchDir dir;
  const RunConfig c = mock_config("long.epub", dir);
  const ConvertResult result = run_convert(c);
  const ContainerModel out = open_container(c.output_epub);
  std::size_t checked = 0;
  std::size_t violations = 0;
  for (const auto& ch : result.chapters) {
    const auto clips = clips_of(out.bytes(ch.smil_path));
    for (std::size_t k = 0; k + 1 < clips.size(); ++k) {
      ++checked;
      if (clips[k].end != clips[k + 1].begin) ++violations;
    }
    if (!clips.empty() && clips.front().begin != format_clock(0.0)) ++violations;
  }
  return {result.sentences >= 200 && checked > 0 && violations == 0,
          std::to_string(result.sentences) + " sentences, " + std::to_string(checked) + " boundaries, " +
              std::to_string(violations) + " violations"};
}

Verdict reconstruction() {
  ScratchDir dir;
  double worst = 0.0;
  std::size_t n = 0;
  for (const char* name : {"long.epub", "styled.epub", "two_spine.epub"}) {
    const RunConfig c = mock_config(name, dir);
    const ConvertResult result = run_convert(c);
    const ContainerModel out = open_container(c.output_epub);
    for (const auto& ch : result.chapters) {
      const auto clips = clips_of(out.bytes(ch.smil_path));
      if (clips.size() != ch.unit_durations.size()) return {false, ch.smil_path + ": par count mismatch"};
      double t = 0.0;
      for (std::size_t k = 0; k < clips.size(); ++k) {
        worst = std::max(worst, std::abs(parse_clock(clips[k].begin) - t));
        t += ch.unit_durations[k] + ch.delta_s;
        worst = std::max(worst, std::abs(parse_clock(clips[k].end) - t));
        ++n;
      }
    }
  }
  return {worst <= 0.001, std::to_string(n) + " pars, " + fmt("max deviation %.6fs", worst)};
}

Verdict layout_preservation() {
  ScratchDir dir;
  std::size_t identical = 0;
  std::size_t chapters = 0;
  for (const char* name : {"styled.epub", "two_spine.epub", "minimal.epub"}) {
    const RunConfig c = mock_config(name, dir);
    const ConvertResult result = run_convert(c);
    const ContainerModel in = open_container(c.input_epub);
    const ContainerModel out = open_container(c.output_epub);
    std::set<std::string> touched{in.opf_path()};
    for (const auto& ch : result.chapters) touched.insert(ch.xhtml_path);
    for (const auto& e : in.entries()) {
      if (touched.count(e.name) != 0) continue;
      if (!out.contains(e.name) || fnv1a(out.bytes(e.name)) != fnv1a(e.data) || out.bytes(e.name) != e.data) {
        return {false, std::string(name) + ": " + e.name + " changed"};
      }
      ++identical;
    }
    for (const auto& ch : result.chapters) {
      xml::Document doc = parse_xhtml(out.bytes(ch.xhtml_path));
      std::vector<std::string> ids;
      for (const auto& unit : ch.unit_anchors) ids.insert(ids.end(), unit.begin(), unit.end());
      if (unwrap_anchors(doc.root(), ids) != ch.sentences) return {false, ch.xhtml_path + ": span count"};
      if (xml::text_content(doc.root()) != xml::text_content(parse_xhtml(in.bytes(ch.xhtml_path)).root())) {
        return {false, std::string(name) + ": " + ch.xhtml_path + " text content differs"};
      }
      ++chapters;
    }
  }
  return {true, std::to_string(identical) + " untouched entries identical, " + std::to_string(chapters) +
                    " chapters text-equal"};
}

std::string random_text(std::mt19937_64& rng, std::size_t length) {
  static const std::string alphabet = "abcdefghij klmnop qrstuv wxyz,;: ";
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::string s;
  for (std::size_t i = 0; i < length; ++i) s += alphabet[pick(rng)];
  s.front() = 'a';
  s.back() = '.';
  return s;
}

Verdict lambda_heuristics() {
  const EngineLimits limits;
  std::mt19937_64 rng(20260);
  std::uniform_int_distribution<std::size_t> length(1, 600);
  std::uniform_int_distribution<int> block_break(0, 3);
  MockEngine engine;
  std::size_t units = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<SentenceSeg> segs;
    std::size_t block = 0;
    for (std::size_t i = 0; i < 12; ++i) {
      if (block_break(rng) == 0) ++block;
      SentenceSeg s;
      s.anchor_id = make_anchor_id(0, i);
      s.tts_text = random_text(rng, length(rng) % 3 == 0 ? length(rng) : length(rng) % 70 + 1);
      s.display_text = s.tts_text;
      s.block = {0, block, "p"};
      s.seg_index = i;
      segs.push_back(s);
    }
    const auto plans = plan_units(segs, limits);
    std::size_t covered = 0;
    for (std::size_t u = 0; u < plans.size(); ++u) {
      const UnitPlan& p = plans[u];
      const SynthUnit unit = synthesize_unit(p, engine, {});
      for (const auto& piece : unit.pieces) {
        if (utf8::count(piece.text) > limits.lambda_plus) return {false, "piece above max_chars"};
      }
      const std::size_t last = p.first_seg + p.anchor_ids.size() - 1;
      if (utf8::count(p.tts_text) < limits.lambda_minus && last + 1 < segs.size() &&
          segs[last + 1].block == segs[last].block) {
        return {false, "short unit " + p.anchor_ids.front() + " left a same-block successor unmerged"};
      }
      covered += p.anchor_ids.size();
      ++units;
    }
    if (covered != segs.size()) return {false, "plan does not cover every sentence"};
  }
  std::size_t strings = 0;
  for (int i = 0; i < 1000; ++i) {
    const std::string s = random_text(rng, length(rng) * 2);
    const auto pieces = split_text(s, limits.lambda_plus);
    if (join_pieces(pieces) != s) return {false, "split_text reconstruction failed"};
    for (const auto& piece : pieces) {
      if (utf8::count(piece.text) > limits.lambda_plus) return {false, "split_text piece above max_chars"};
    }
    ++strings;
  }
  return {true, std::to_string(units) + " planned units, " + std::to_string(strings) + " strings reconstructed"};
}

Verdict reactive_split() {
  static const std::vector<std::string> words{"the",    "harbour", "lanterns", "swung", "over",  "1997",
                                               "cargo",  "while",   "sailors",  "sang,", "and",   "nobody",
                                               "slept;", "morning", "returned", "grey"};
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
  std::string sentence = "Then";
  while (sentence.size() < 499) sentence += ' ' + words[pick(rng)];
  sentence.resize(499);
  while (sentence.back() == ' ') sentence.back() = 'x';
  sentence += '.';
  SentenceSeg seg;
  seg.anchor_id = make_anchor_id(0, 0);
  seg.tts_text = sentence;
  seg.display_text = sentence;
  const std::vector<SentenceSeg> segs{seg};
  MockEngine engine(40);
  const auto plans = plan_units(segs, EngineLimits{});
  const SynthUnit unit = synthesize_unit(plans.at(0), engine, {});
  std::size_t expected = 0;
  for (const auto& piece : unit.pieces) {
    if (utf8::count(piece.text) > 40) return {false, "piece above the overflow probe"};
    expected += MockEngine::samples_for(utf8::count(piece.text));
  }
  std::size_t recorded = 0;
  for (auto n : unit.piece_samples) recorded += n;
  const std::size_t actual = unit.waveform.size();
  const std::size_t boundaries = unit.pieces.size() - 1;
  const auto diff = [](std::size_t a, std::size_t b) { return a > b ? a - b : b - a; };
  const bool pass = join_pieces(unit.pieces) == sentence && diff(actual, expected) <= boundaries &&
                    diff(actual, recorded) <= boundaries;
  return {pass && sentence.size() == 500, std::to_string(unit.pieces.size()) + " pieces, " + std::to_string(actual) + " samples vs " +
                    std::to_string(expected) + " expected"};
}

Verdict stitch_arithmetic() {
  const std::vector<Waveform> units{Waveform{std::vector<float>(48000, 0.25f), 24000},
                                    Waveform{std::vector<float>(72000, 0.25f), 24000}};
  StitchParams params;
  params.delta_s = 0.15;
  const StitchedChapter ch = stitch(units, params);
  const auto expected = static_cast<std::size_t>(std::llround(5.30 * 24000));
  const std::vector<std::vector<std::string>> anchors{{"a"}, {"b"}};
  const auto iv = compute_intervals(ch, anchors);
  const auto near = [](double a, double b) { return std::abs(a - b) <= 1e-12; };
  const bool pass = ch.audio.size() == expected && iv.size() == 2 && iv[0].t_start == 0.0 &&
                    near(iv[0].t_end, 2.15) && iv[1].t_start == iv[0].t_end && near(iv[1].t_end, 5.30) &&
                    format_clock(iv[0].t_end) == "0:00:02.150" && format_clock(iv[1].t_end) == "0:00:05.300";
  return {pass, std::to_string(ch.audio.size()) + " samples (expected " + std::to_string(expected) + "), " +
                    fmt("intervals (%.6f, %.6f) ", iv.at(0).t_start, iv.at(0).t_end) +
                    fmt("(%.6f, %.6f)", iv.at(1).t_start, iv.at(1).t_end)};
}

double sorted_quantile(const std::vector<double>& sorted, double p) {
  const double h = static_cast<double>(sorted.size() - 1) * p;
  const double lo = std::floor(h);
  const auto i = static_cast<std::size_t>(lo);
  if (i + 1 >= sorted.size()) return sorted[i];
  return sorted[i] + (h - lo) * (sorted[i + 1] - sorted[i]);
}

Verdict drift_oracle() {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> dist(0.03, 0.12);
  std::vector<DriftSample> samples(10000);
  for (auto& s : samples) s.drift_s = dist(rng);
  const DriftReport r = summarize(samples);

  std::vector<double> sorted;
  double sum = 0.0;
  std::size_t ok = 0;
  for (const auto& s : samples) {
    sorted.push_back(s.drift_s);
    sum += s.drift_s;
    if (s.drift_s >= -0.05 && s.drift_s <= 0.15) ++ok;
  }
  std::sort(sorted.begin(), sorted.end());
  const double qerr = std::max({std::abs(r.p10 - sorted_quantile(sorted, 0.10)),
                                std::abs(r.median - sorted_quantile(sorted, 0.50)),
                                std::abs(r.p90 - sorted_quantile(sorted, 0.90))});
  const bool exact = r.min == sorted.front() && r.max == sorted.back() && r.mean == sum / 10000.0;
  const bool pass = exact && qerr <= 1e-9 && r.pct_acceptable == static_cast<double>(ok) / 10000.0;
  return {pass, std::string(exact ? "min/max/mean exact" : "min/max/mean differ") +
                    fmt(", max quantile error %.3g", qerr)};
}

Verdict synthetic_shift() {
  ScratchDir dir;
  const RunConfig c = mock_config("long.epub", dir);
  run_convert(c);
  ContainerModel candidate = open_container(c.output_epub);
  testing::shift_clips(candidate, 0.200);
  write_container(candidate, dir / "shifted.epub");
  const DriftEvaluation ev = evaluate_drift(c.output_epub, dir / "shifted.epub");
  const DriftReport& r = ev.report;
  return {std::abs(r.mean + 0.200) <= 0.001 && r.pct_acceptable == 0.0,
          std::to_string(r.n_matched) + fmt(" matched, mean %.6f, pct_acceptable %.3f", r.mean, r.pct_acceptable)};
}

}  // namespace
}  // namespace narrate

int main() {
  using Check = std::pair<const char*, std::function<narrate::Verdict()>>;
  const std::vector<Check> checks{
      {"zero-drift-row", narrate::zero_drift_row},
      {"gapless-invariant", narrate::gapless},
      {"timestamp-reconstruction", narrate::reconstruction},
      {"layout-preservation", narrate::layout_preservation},
      {"lambda-heuristics", narrate::lambda_heuristics},
      {"reactive-split", narrate::reactive_split},
      {"stitch-arithmetic", narrate::stitch_arithmetic},
      {"drift-statistics-oracle", narrate::drift_oracle},
      {"synthetic-shift-detection", narrate::synthetic_shift},
  };
  int failures = 0;
  for (const auto& [name, check] : checks) {
    narrate::Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    if (!v.pass) ++failures;
    std::printf("%s %s: %s\n", v.pass ? "PASS" : "FAIL", name, v.detail.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(checks.size()) - failures, checks.size());
  return failures == 0 ? 0 : 1;
}
