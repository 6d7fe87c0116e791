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
#include <string>
#include <string_view>
#include <vector>

namespace narrate {

// Abbreviations that end in a period without ending the sentence. Entries
// include their trailing period and match case-insensitively.
class AbbreviationList {
 public:
  AbbreviationList() = default;
  explicit AbbreviationList(std::vector<std::string> entries);

  // The English list, extended with a few entries for `language` when the
  // primary subtag is one we know (de, fr, es, nb/no/nn).
  static AbbreviationList for_language(std::string_view language);

  bool contains(std::string_view token) const;
  const std::vector<std::string>& entries() const noexcept { return entries_; }

 private:
  std::vector<std::string> entries_;  // lower-cased
};

// NFC, straight quotes, "-" for em/en dashes, "..." for the ellipsis
// character, single spaces, trimmed.
std::string normalize_text(std::string_view raw);

// Byte offsets at which each sentence of `text` begins (its first
// non-whitespace character). Works on raw or normalized text.
std::vector<std::size_t> sentence_starts(std::string_view text,
                                         const AbbreviationList& abbreviations);

// Sentences of normalized text, each trimmed. Joining them with single
// spaces reproduces the input.
std::vector<std::string> split_sentences(std::string_view text,
                                         const AbbreviationList& abbreviations);
std::vector<std::string> split_sentences(std::string_view text);

}  // namespace narrate
