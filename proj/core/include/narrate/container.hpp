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

#include <filesystem>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "narrate/zip.hpp"

namespace narrate {

inline constexpr std::string_view kEpubMimetype = "application/epub+zip";

// An opened OCF archive. Entries keep their archive order; the model tracks
// which paths the pipeline rewrote or created so that everything else can be
// written back untouched.
class ContainerModel {
 public:
  // Validates the OCF invariants and locates the package document.
  static ContainerModel from_entries(std::vector<zip::Entry> entries);

  const std::string& opf_path() const noexcept { return opf_path_; }

  bool contains(std::string_view path) const;
  // Null when absent.
  const std::string* find(std::string_view path) const;
  // Throws IoFailure when absent.
  const std::string& bytes(std::string_view path) const;

  std::span<const zip::Entry> entries() const noexcept { return entries_; }
  std::vector<std::string> paths() const;

  // Replaces an existing entry (recorded as modified) or appends a new one
  // (recorded as added).
  void put(std::string_view path, std::string data);

  const std::set<std::string>& modified() const noexcept { return modified_; }
  const std::set<std::string>& added() const noexcept { return added_; }

 private:
  std::vector<zip::Entry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
  std::string opf_path_;
  std::set<std::string> modified_;
  std::set<std::string> added_;
};

ContainerModel read_container(std::string_view image);
ContainerModel open_container(const std::filesystem::path& file);

// Archive image with "mimetype" first and stored, every other member
// deflated, originals in input order followed by added entries.
std::string serialize_container(const ContainerModel& model);
void write_container(const ContainerModel& model, const std::filesystem::path& out);

std::string read_file(const std::filesystem::path& file);
void write_file(const std::filesystem::path& file, std::string_view data);

// Helpers for '/'-separated archive paths.
namespace archive_path {

// "OEBPS/content.opf" -> "OEBPS/", "content.opf" -> "".
std::string directory(std::string_view path);
std::string filename(std::string_view path);
std::string stem(std::string_view path);
std::string percent_decode(std::string_view text);
// Drops any '#fragment', percent-decodes, joins onto `base_dir` and removes
// "." and ".." segments.
std::string resolve(std::string_view base_dir, std::string_view href);
// Relative reference from a directory ("OEBPS/smil/") to a file path.
std::string relative(std::string_view from_dir, std::string_view to_path);
// Percent-encodes every byte outside the URL path character set.
std::string percent_encode(std::string_view path);
// relative(), encoded for use in an href or src attribute.
std::string href(std::string_view from_dir, std::string_view to_path);

}  // namespace archive_path

}  // namespace narrate
