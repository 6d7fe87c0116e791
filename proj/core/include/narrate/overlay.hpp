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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "narrate/package.hpp"
#include "narrate/xml.hpp"

namespace narrate {

struct StitchedChapter;

inline constexpr std::string_view kDefaultActiveClass = "-epub-media-overlay-active";

// One par: the heading anchor and the audio interval it highlights. Anchors
// merged into the same synthesis unit are listed in `covered` and share the
// interval.
struct ClipInterval {
  std::string anchor_id;
  std::vector<std::string> covered;
  double t_start = 0.0;
  double t_end = 0.0;
};

// t_start[k] = sum over i < k of (dur[i] + delta); t_end[k] = t_start[k+1];
// the last unit ends at its start + dur + delta. Throws EmptyChapter for N=0.
std::vector<ClipInterval> compute_intervals(std::span<const double> unit_durations, double delta_s,
                                            std::span<const std::vector<std::string>> anchors);

// Same construction evaluated in whole samples, so every boundary is the
// exact rational time of the stitched stream.
std::vector<ClipInterval> compute_intervals(const StitchedChapter& chapter,
                                            std::span<const std::vector<std::string>> anchors);

// "H:MM:SS.mmm", milliseconds truncated, hours unpadded.
std::string format_clock(double seconds);

// SMIL clock values: full ("1:02:05.5"), partial ("02:05.500") and
// timecounts ("5.5s", "500ms", "1.5min", "2h", bare seconds). Throws
// InvariantViolation on anything else.
double parse_clock(std::string_view clock);

struct SmilDoc {
  std::string textref;    // chapter XHTML relative to the SMIL file
  std::string audio_src;  // chapter audio relative to the SMIL file
  std::vector<ClipInterval> pars;
  double total_duration = 0.0;
};

// Throws InvariantViolation unless the pars start at 0, are strictly
// positive in length and meet exactly (as numbers and as clock strings).
void validate_smil(const SmilDoc& doc);
std::string emit_smil(const SmilDoc& doc);

std::string emit_css(std::string_view active_class = kDefaultActiveClass);

struct ChapterOverlay {
  std::size_t chapter_index = 0;
  std::string xhtml_path;  // archive paths
  std::string smil_path;
  std::string audio_path;
  std::string audio_media_type;
  SmilDoc smil;
};

struct OverlayBundle {
  std::vector<ChapterOverlay> chapters;
  std::string css_path;
  std::string active_class = std::string(kDefaultActiveClass);
  double total_duration = 0.0;  // sum of the chapters' SMIL durations
};

// Adds SMIL, audio and CSS items, binds each chapter to its SMIL through
// media-overlay and records media:duration (per SMIL and total) and
// media:active-class. Throws MissingChapterItem when a chapter XHTML has no
// manifest item.
PackageDoc update_package(const PackageDoc& pkg, const OverlayBundle& bundle);

// Appends <link rel="stylesheet"> as the last child of the document head.
void link_stylesheet(xml::Document& doc, std::string_view href);

}  // namespace narrate
