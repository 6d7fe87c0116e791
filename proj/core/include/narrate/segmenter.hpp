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

#include "narrate/sentences.hpp"
#include "narrate/xml.hpp"

namespace narrate {

// A leaf block element with narrative text.
struct BlockRef {
  std::size_t chapter_index = 0;  // spine position
  std::size_t block_index = 0;    // order within the chapter
  std::string element_name;       // local name: p, h1..h6, li, ...

  friend bool operator==(const BlockRef&, const BlockRef&) = default;
};

// One sentence wrapped in an anchor span.
struct SentenceSeg {
  std::string anchor_id;
  std::string display_text;  // text content of the span, verbatim
  std::string tts_text;      // normalize_text(narrated characters)
  BlockRef block;
  std::size_t seg_index = 0;  // dense within the chapter
};

// "c{chapter+1:02}_s{seg+1:04}".
std::string make_anchor_id(std::size_t chapter_index, std::size_t seg_index);

// Parses content-document bytes, reporting MalformedXhtml on failure.
xml::Document parse_xhtml(std::string_view xhtml);

std::vector<BlockRef> extract_blocks(const xml::Document& doc, std::size_t chapter_index = 0);
std::vector<BlockRef> extract_blocks(std::string_view xhtml, std::size_t chapter_index = 0);

// Wraps every sentence of every narrative block in <span id="...">. Nothing
// outside the wrapped runs changes; text nodes are split only where a
// sentence boundary falls inside them.
std::vector<SentenceSeg> inject_anchors(xml::Document& doc, std::size_t chapter_index,
                                        const AbbreviationList& abbreviations);

struct InjectedChapter {
  std::string xhtml;
  std::vector<SentenceSeg> segments;
};

InjectedChapter inject_anchors(std::string_view xhtml, std::size_t chapter_index,
                               const AbbreviationList& abbreviations);
InjectedChapter inject_anchors(std::string_view xhtml, std::size_t chapter_index);

// Replaces each span whose id is in `anchor_ids` by its children. Returns the
// number of spans removed.
std::size_t unwrap_anchors(xml::Node& root, std::span<const std::string> anchor_ids);

}  // namespace narrate
