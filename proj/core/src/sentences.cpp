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

#include "narrate/sentences.hpp"

#include <unicode/normalizer2.h>
#include <unicode/unistr.h>

#include <algorithm>

#include "narrate/utf8.hpp"

namespace narrate {
namespace {

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

bool is_terminator(char32_t cp) { return cp == '.' || cp == '?' || cp == '!' || cp == 0x2026; }

bool is_closing(char32_t cp) {
  switch (cp) {
    case '"': case '\'': case ')': case ']':
    case 0x201D: case 0x2019: case 0x00BB: case 0x203A:
      return true;
    default:
      return false;
  }
}

bool is_opening(char32_t cp) {
  switch (cp) {
    case '"': case '\'': case '(': case '[':
    case 0x201C: case 0x2018: case 0x201E: case 0x00AB: case 0x2039:
      return true;
    default:
      return false;
  }
}

std::string nfc(std::string_view raw) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* normalizer = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) return std::string(raw);
  const icu::UnicodeString source =
      icu::UnicodeString::fromUTF8(icu::StringPiece(raw.data(), static_cast<int32_t>(raw.size())));
  if (normalizer->isNormalized(source, status) && U_SUCCESS(status)) return std::string(raw);
  status = U_ZERO_ERROR;
  const icu::UnicodeString normalized = normalizer->normalize(source, status);
  if (U_FAILURE(status)) return std::string(raw);
  std::string out;
  normalized.toUTF8String(out);
  return out;
}

}  // namespace

AbbreviationList::AbbreviationList(std::vector<std::string> entries) {
  for (auto& e : entries) entries_.push_back(ascii_lower(e));
}

AbbreviationList AbbreviationList::for_language(std::string_view language) {
  std::vector<std::string> entries{"Mr.", "Mrs.", "Ms.", "Dr.", "St.", "vs.", "e.g.",
                                   "i.e.", "etc.", "Jr.", "Sr.", "Prof."};
  const std::string primary = ascii_lower(language.substr(0, language.find_first_of("-_")));
  if (primary == "de") {
    entries.insert(entries.end(), {"z.B.", "bzw.", "Nr.", "ca.", "Hr.", "Fr.", "usw."});
  } else if (primary == "fr") {
    entries.insert(entries.end(), {"M.", "Mme.", "Mlle.", "cf."});
  } else if (primary == "es") {
    entries.insert(entries.end(), {"Sra.", "Srta.", "Ud.", "Uds."});
  } else if (primary == "nb" || primary == "no" || primary == "nn") {
    entries.insert(entries.end(), {"f.eks.", "bl.a.", "ca.", "nr.", "mv."});
  }
  return AbbreviationList(std::move(entries));
}

bool AbbreviationList::contains(std::string_view token) const {
  const std::string key = ascii_lower(token);
  return std::find(entries_.begin(), entries_.end(), key) != entries_.end();
}

std::string normalize_text(std::string_view raw) {
  const std::string composed = nfc(raw);
  std::string out;
  out.reserve(composed.size());
  bool pending_space = false;
  for (std::size_t pos = 0; pos < composed.size();) {
    const utf8::Decoded d = utf8::decode(composed, pos);
    pos += d.length;
    if (utf8::is_space(d.cp)) {
      pending_space = !out.empty();
      continue;
    }
    if (d.cp == 0x00AD || d.cp == 0x200B) continue;  // soft hyphen, zero-width space
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    switch (d.cp) {
      case 0x201C: case 0x201D: case 0x201E: case 0x201F: case 0x2033:
        out.push_back('"');
        break;
      case 0x2018: case 0x2019: case 0x201A: case 0x201B: case 0x2032:
        out.push_back('\'');
        break;
      case 0x2012: case 0x2013: case 0x2014: case 0x2015:
        out.push_back('-');
        break;
      case 0x2026:
        out += "...";
        break;
      default:
        utf8::append(out, d.cp);
    }
  }
  return out;
}

std::vector<std::size_t> sentence_starts(std::string_view text,
                                         const AbbreviationList& abbreviations) {
  std::vector<std::size_t> starts;
  std::size_t pos = 0;
  const auto skip_space = [&](std::size_t p) {
    while (p < text.size()) {
      const utf8::Decoded d = utf8::decode(text, p);
      if (!utf8::is_space(d.cp)) break;
      p += d.length;
    }
    return p;
  };
  pos = skip_space(0);
  if (pos >= text.size()) return starts;
  starts.push_back(pos);
  std::size_t token_begin = pos;  // start of the current whitespace-delimited token

  while (pos < text.size()) {
    utf8::Decoded d = utf8::decode(text, pos);
    if (utf8::is_space(d.cp)) {
      pos = skip_space(pos);
      token_begin = pos;
      continue;
    }
    if (!is_terminator(d.cp)) {
      pos += d.length;
      continue;
    }
    const std::size_t term_begin = pos;
    bool single_period = d.cp == '.';
    pos += d.length;
    while (pos < text.size() && is_terminator((d = utf8::decode(text, pos)).cp)) {
      single_period = false;
      pos += d.length;
    }
    const std::size_t term_end = pos;
    while (pos < text.size() && is_closing((d = utf8::decode(text, pos)).cp)) pos += d.length;
    const std::size_t after_punct = pos;
    const std::size_t next = skip_space(pos);
    if (next == after_punct || next >= text.size()) continue;  // no whitespace, or end of text

    const char32_t following = utf8::decode(text, next).cp;
    if (!utf8::is_upper(following) && !is_opening(following)) continue;

    if (single_period) {
      std::size_t word_begin = token_begin;
      while (word_begin < term_begin && is_opening(utf8::decode(text, word_begin).cp)) {
        word_begin += utf8::decode(text, word_begin).length;
      }
      if (abbreviations.contains(text.substr(word_begin, term_end - word_begin))) continue;
    }
    starts.push_back(next);
    pos = next;
    token_begin = next;
  }
  return starts;
}

std::vector<std::string> split_sentences(std::string_view text,
                                         const AbbreviationList& abbreviations) {
  const std::vector<std::size_t> starts = sentence_starts(text, abbreviations);
  std::vector<std::string> out;
  out.reserve(starts.size());
  for (std::size_t i = 0; i < starts.size(); ++i) {
    std::size_t end = i + 1 < starts.size() ? starts[i + 1] : text.size();
    while (end > starts[i] && (text[end - 1] == ' ' || text[end - 1] == '\t' ||
                               text[end - 1] == '\n' || text[end - 1] == '\r')) {
      --end;
    }
    out.emplace_back(text.substr(starts[i], end - starts[i]));
  }
  return out;
}

std::vector<std::string> split_sentences(std::string_view text) {
  static const AbbreviationList english = AbbreviationList::for_language("en");
  return split_sentences(text, english);
}

}  // namespace narrate
