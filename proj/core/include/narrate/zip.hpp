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

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

// Raw zip archive access: stored and deflated members, no zip64, no
// encryption. Errors are reported as narrate::Error with ErrorCode::NotZip.
namespace narrate::zip {

struct Entry {
  std::string name;
  std::string data;  // uncompressed payload
  bool stored = false;  // write without compression
  std::uint16_t dos_time = 0;
  std::uint16_t dos_date = (1 << 5) | 1;  // 1980-01-01
};

std::uint32_t crc32(std::string_view data) noexcept;

// Parses an archive image. Members are returned in central directory order.
std::vector<Entry> read_archive(std::string_view image);

// Serializes entries in the given order. Every member honours its `stored`
// flag; the rest are deflated.
std::string write_archive(std::span<const Entry> entries);

}  // namespace narrate::zip
