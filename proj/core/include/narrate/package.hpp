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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace narrate {

class ContainerModel;

inline constexpr std::string_view kXhtmlMediaType = "application/xhtml+xml";
inline constexpr std::string_view kSmilMediaType = "application/smil+xml";
inline constexpr std::string_view kCssMediaType = "text/css";

// One metadata statement. EPUB 3 <meta property> elements, Dublin Core
// elements (property "dc:title" etc.) and EPUB 2 <meta name content> pairs
// all map onto this record.
struct MetaRecord {
  std::string property;
  std::optional<std::string> refines;
  std::string value;

  friend bool operator==(const MetaRecord&, const MetaRecord&) = default;
};

struct ManifestItem {
  std::string id;
  std::string href;  // verbatim, relative to the package document
  std::string media_type;
  std::optional<std::string> media_overlay;
  std::optional<std::string> properties;

  friend bool operator==(const ManifestItem&, const ManifestItem&) = default;
};

struct PackageDoc {
  std::string opf_path;  // archive path of the package document
  std::string version;
  std::vector<MetaRecord> metadata;
  std::vector<ManifestItem> manifest;
  std::vector<std::string> spine;  // manifest ids in reading order

  const ManifestItem* item(std::string_view id) const;
  ManifestItem* item(std::string_view id);
  // Manifest item whose resolved href equals `archive_path`.
  const ManifestItem* item_at(std::string_view archive_path) const;
  // Archive path an item's href points to.
  std::string resolve(const ManifestItem& item) const;
  std::string opf_directory() const;
  // An id not yet used in the manifest, starting from `base`.
  std::string unique_id(std::string_view base) const;
};

PackageDoc parse_package(const ContainerModel& model);
PackageDoc parse_package_xml(std::string_view opf_bytes, std::string_view opf_path);

// Applies the differences between `updated` and the package parsed from
// `original_opf` to the original document: new manifest items and metadata
// are appended, media-overlay attributes and the version are rewritten.
// Everything else keeps its original bytes.
std::string render_package(std::string_view original_opf, const PackageDoc& updated);

}  // namespace narrate
