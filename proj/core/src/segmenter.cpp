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

#include "narrate/segmenter.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <unordered_set>

#include "narrate/error.hpp"
#include "narrate/utf8.hpp"

namespace narrate {
namespace {

bool is_block_candidate(std::string_view local) {
  static const std::unordered_set<std::string_view> kBlocks{
      "p",  "h1", "h2", "h3", "h4", "h5", "h6",         "li",
      "blockquote",   "figcaption", "td", "th", "dd", "dt", "div"};
  return kBlocks.count(local) > 0;
}

bool has_epub_type(const xml::Node& n, std::string_view token) {
  for (const auto& a : n.attributes()) {
    const auto colon = a.name.find(':');
    if (colon == std::string::npos || std::string_view(a.name).substr(colon + 1) != "type") continue;
    std::size_t start = 0;
    const std::string& v = a.value;
    while (start < v.size()) {
      auto end = v.find(' ', start);
      if (end == std::string::npos) end = v.size();
      if (std::string_view(v).substr(start, end - start) == token) return true;
      start = end + 1;
    }
  }
  return false;
}

// Subtrees that are never narrated.
bool is_excluded(const xml::Node& n) {
  static const std::unordered_set<std::string_view> kExcluded{
      "head", "script", "style", "audio", "video", "pre", "code",
      "svg",  "math",   "rt",    "rp",    "template", "noscript"};
  const std::string_view local = n.local_name();
  if (kExcluded.count(local) > 0) return true;
  if (local == "nav" && (has_epub_type(n, "toc") || has_epub_type(n, "landmarks") ||
                         has_epub_type(n, "page-list"))) {
    return true;
  }
  return has_epub_type(n, "pagebreak");
}

// A stretch of the narration string that came from one source.
struct Run {
  std::size_t begin = 0;  // byte range in the narration string
  std::size_t end = 0;
  std::size_t child = 0;  // index of the block child it lies under
  const xml::Node* text = nullptr;  // null for synthetic separators
  std::size_t node_offset = 0;
};

// The narratable characters of a block, with their provenance.
struct Flattened {
  std::string text;
  std::vector<Run> runs;

  const Run& run_at(std::size_t pos) const {
    auto it = std::upper_bound(runs.begin(), runs.end(), pos,
                               [](std::size_t p, const Run& r) { return p < r.end; });
    return *it;
  }
};

void flatten_into(const xml::Node& node, std::size_t child, Flattened& out) {
  if (node.is_text()) {
    if (node.text().empty()) return;
    out.runs.push_back({out.text.size(), out.text.size() + node.text().size(), child, &node, 0});
    out.text += node.text();
    return;
  }
  if (!node.is_element() || is_excluded(node)) return;
  if (node.local_name() == "br") {
    out.runs.push_back({out.text.size(), out.text.size() + 1, child, nullptr, 0});
    out.text += ' ';
    return;
  }
  for (const auto& c : node.children()) flatten_into(*c, child, out);
}

Flattened flatten(const xml::Node& block) {
  Flattened out;
  for (std::size_t i = 0; i < block.child_count(); ++i) flatten_into(block.child(i), i, out);
  return out;
}

// Leaf blocks in document order. Returns whether `n` is or contains a block
// candidate.
bool collect_blocks(xml::Node& n, std::vector<xml::Node*>& out) {
  if (!n.is_element() && n.kind() != xml::NodeKind::Document) return false;
  if (n.is_element() && is_excluded(n)) return false;
  bool has_candidate_below = false;
  for (const auto& c : n.children()) has_candidate_below |= collect_blocks(*c, out);
  const bool candidate = n.is_element() && is_block_candidate(n.local_name());
  if (candidate && !has_candidate_below) {
    const Flattened flat = flatten(n);
    if (!utf8::is_blank(flat.text)) out.push_back(&n);
  }
  return candidate || has_candidate_below;
}

std::vector<xml::Node*> leaf_blocks(xml::Document& doc) {
  std::vector<xml::Node*> blocks;
  collect_blocks(doc.root(), blocks);
  return blocks;
}

// A position between block children, optionally inside a direct text child.
struct Cut {
  std::size_t child = 0;
  std::size_t offset = 0;  // > 0 only for a split inside a direct text child

  friend bool operator==(const Cut&, const Cut&) = default;
  friend auto operator<=>(const Cut&, const Cut&) = default;
};

Cut normalized(const xml::Node& block, Cut cut) {
  if (cut.offset > 0 && cut.child < block.child_count() &&
      cut.offset >= block.child(cut.child).text().size()) {
    return {cut.child + 1, 0};
  }
  return cut;
}

std::string span_name_for(const xml::Node& block) {
  const std::string& name = block.name();
  const auto colon = name.find(':');
  return colon == std::string::npos ? std::string("span") : name.substr(0, colon + 1) + "span";
}

std::size_t last_char_begin(std::string_view text) {
  std::size_t pos = text.size();
  while (pos > 0) {
    --pos;
    if ((static_cast<unsigned char>(text[pos]) & 0xC0) != 0x80) break;
  }
  return pos;
}

std::vector<SentenceSeg> segment_block(xml::Node& block, const BlockRef& ref,
                                       std::size_t first_seg, const AbbreviationList& abbreviations) {
  const Flattened flat = flatten(block);
  const std::vector<std::size_t> starts = sentence_starts(flat.text, abbreviations);
  if (starts.empty()) return {};

  const auto is_direct = [&](const Run& r) {
    return r.text != nullptr && r.child < block.child_count() && &block.child(r.child) == r.text;
  };

  // Sentence boundaries that can be honoured at child granularity. A boundary
  // strictly inside an inline element is dropped, merging the two sentences.
  struct Unit {
    std::size_t narration_begin;
    Cut cut;
  };
  std::vector<Unit> units;
  for (std::size_t k = 0; k < starts.size(); ++k) {
    const std::size_t p = starts[k];
    const Run& r = flat.run_at(p);
    Cut cut;
    if (is_direct(r)) {
      cut = normalized(block, {r.child, r.node_offset + (p - r.begin)});
    } else if (k == 0 || p == 0 || flat.run_at(p - 1).child != r.child) {
      cut = {r.child, 0};
    } else {
      continue;
    }
    if (!units.empty() && !(units.back().cut < cut)) continue;
    units.push_back({p, cut});
  }

  // Drop units whose narration normalizes to nothing.
  const auto narration = [&](std::size_t i) {
    const std::size_t end = i + 1 < units.size() ? units[i + 1].narration_begin : flat.text.size();
    return normalize_text(std::string_view(flat.text).substr(units[i].narration_begin,
                                                             end - units[i].narration_begin));
  };
  for (std::size_t i = 0; i < units.size();) {
    if (!narration(i).empty()) {
      ++i;
      continue;
    }
    if (units.size() == 1) return {};
    if (i == 0) {
      units[1].cut = units[0].cut;
      units[1].narration_begin = units[0].narration_begin;
    }
    units.erase(units.begin() + static_cast<std::ptrdiff_t>(i));
  }

  // Trailing edge: just after the last narrated non-space character.
  std::size_t last = flat.text.size();
  while (last > 0) {
    const std::size_t b = last_char_begin(std::string_view(flat.text).substr(0, last));
    if (!utf8::is_space(utf8::decode(flat.text, b).cp)) break;
    last = b;
  }
  const std::size_t last_begin = last_char_begin(std::string_view(flat.text).substr(0, last));
  const Run& tail_run = flat.run_at(last_begin);
  const Cut tail = is_direct(tail_run)
                       ? normalized(block, {tail_run.child, tail_run.node_offset + (last - tail_run.begin)})
                       : Cut{tail_run.child + 1, 0};

  std::vector<std::string> tts;
  for (std::size_t i = 0; i < units.size(); ++i) tts.push_back(narration(i));

  // Resolve cuts to node pointers, splitting text nodes right to left so that
  // earlier child indices stay valid.
  std::vector<Cut> cuts;
  for (const auto& u : units) cuts.push_back(u.cut);
  cuts.push_back(tail);
  std::vector<xml::Node*> anchors_at(cuts.size(), nullptr);
  std::vector<std::size_t> order(cuts.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cuts[b] < cuts[a]; });
  std::vector<xml::Node*> original(block.child_count());
  for (std::size_t i = 0; i < block.child_count(); ++i) original[i] = &block.child(i);
  for (const std::size_t i : order) {
    const Cut& c = cuts[i];
    if (c.child >= original.size()) {
      anchors_at[i] = nullptr;
    } else if (c.offset == 0) {
      anchors_at[i] = original[c.child];
    } else {
      anchors_at[i] = &original[c.child]->split_text(c.offset);
    }
  }
  std::vector<std::size_t> cut_index(cuts.size());
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    cut_index[i] = anchors_at[i] == nullptr ? block.child_count() : anchors_at[i]->index_in_parent();
  }

  const std::string span_name = span_name_for(block);
  std::vector<SentenceSeg> segs(units.size());
  for (std::size_t k = units.size(); k-- > 0;) {
    const std::size_t begin = cut_index[k];
    const std::size_t end = cut_index[k + 1];
    SentenceSeg& seg = segs[k];
    seg.seg_index = first_seg + k;
    seg.anchor_id = make_anchor_id(ref.chapter_index, seg.seg_index);
    seg.tts_text = std::move(tts[k]);
    seg.block = ref;
    auto span = xml::make_element(span_name, {{"id", seg.anchor_id}}, false);
    std::vector<std::unique_ptr<xml::Node>> moved;
    for (std::size_t i = begin; i < end; ++i) moved.push_back(block.remove_child(begin));
    for (auto& m : moved) span->append_child(std::move(m));
    seg.display_text = xml::text_content(*span);
    block.insert_child(begin, std::move(span));
  }
  return segs;
}

}  // namespace

std::string make_anchor_id(std::size_t chapter_index, std::size_t seg_index) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "c%02zu_s%04zu", chapter_index + 1, seg_index + 1);
  return buf;
}

xml::Document parse_xhtml(std::string_view xhtml) {
  try {
    return xml::parse(xhtml);
  } catch (const xml::ParseError& e) {
    throw Error(ErrorCode::MalformedXhtml, std::string("content document is not well-formed: ") + e.what());
  }
}

std::vector<BlockRef> extract_blocks(const xml::Document& doc, std::size_t chapter_index) {
  // leaf_blocks only reads the tree.
  auto& mutable_doc = const_cast<xml::Document&>(doc);
  std::vector<BlockRef> out;
  for (const xml::Node* block : leaf_blocks(mutable_doc)) {
    out.push_back({chapter_index, out.size(), std::string(block->local_name())});
  }
  return out;
}

std::vector<BlockRef> extract_blocks(std::string_view xhtml, std::size_t chapter_index) {
  return extract_blocks(parse_xhtml(xhtml), chapter_index);
}

std::vector<SentenceSeg> inject_anchors(xml::Document& doc, std::size_t chapter_index,
                                        const AbbreviationList& abbreviations) {
  std::set<std::string> existing_ids;
  doc.root().walk([&](xml::Node& n) {
    if (n.is_element()) {
      if (auto id = n.attribute("id")) existing_ids.insert(*id);
    }
    return true;
  });

  std::vector<SentenceSeg> out;
  const std::vector<xml::Node*> blocks = leaf_blocks(doc);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const BlockRef ref{chapter_index, b, std::string(blocks[b]->local_name())};
    auto segs = segment_block(*blocks[b], ref, out.size(), abbreviations);
    for (auto& s : segs) {
      if (existing_ids.count(s.anchor_id) > 0) {
        throw Error(ErrorCode::MalformedXhtml, "content document already uses id " + s.anchor_id);
      }
      out.push_back(std::move(s));
    }
  }
  return out;
}

InjectedChapter inject_anchors(std::string_view xhtml, std::size_t chapter_index,
                               const AbbreviationList& abbreviations) {
  xml::Document doc = parse_xhtml(xhtml);
  InjectedChapter out;
  out.segments = inject_anchors(doc, chapter_index, abbreviations);
  out.xhtml = out.segments.empty() ? std::string(xhtml) : xml::serialize(doc);
  return out;
}

InjectedChapter inject_anchors(std::string_view xhtml, std::size_t chapter_index) {
  return inject_anchors(xhtml, chapter_index, AbbreviationList::for_language("en"));
}

std::size_t unwrap_anchors(xml::Node& root, std::span<const std::string> anchor_ids) {
  const std::set<std::string> ids(anchor_ids.begin(), anchor_ids.end());
  std::size_t removed = 0;
  const std::function<void(xml::Node&)> visit = [&](xml::Node& n) {
    for (std::size_t i = 0; i < n.child_count();) {
      xml::Node& c = n.child(i);
      if (c.is_element() && c.local_name() == "span") {
        const auto id = c.attribute("id");
        if (id && ids.count(*id) > 0) {
          auto span = n.remove_child(i);
          const std::size_t count = span->child_count();
          for (std::size_t j = 0; j < count; ++j) n.insert_child(i + j, span->remove_child(0));
          ++removed;
          continue;  // revisit the promoted children
        }
      }
      visit(c);
      ++i;
    }
  };
  visit(root);
  return removed;
}

}  // namespace narrate
