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

// Minimal UTF-8 helpers. Invalid sequences decode as U+FFFD consuming one
// byte, so iteration always makes progress.
namespace narrate::utf8 {

struct Decoded {
  char32_t cp;
  std::size_t length;  // bytes consumed
};

Decoded decode(std::string_view text, std::size_t pos) noexcept;

void append(std::string& out, char32_t cp);

std::size_t count(std::string_view text) noexcept;

// Byte offset of the code point with index `n`; text.size() when past the end.
std::size_t offset_of(std::string_view text, std::size_t n) noexcept;

// White_Space property, which includes U+00A0 and the other Unicode spaces.
bool is_space(char32_t cp) noexcept;

bool is_upper(char32_t cp) noexcept;

bool is_digit(char32_t cp) noexcept;

// True when every code point of `text` is whitespace.
bool is_blank(std::string_view text) noexcept;

}  // namespace narrate::utf8
