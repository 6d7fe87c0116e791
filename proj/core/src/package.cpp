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

#include "narrate/package.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "narrate/container.hpp"
#include "narrate/error.hpp"
#include "narrate/utf8.hpp"
#include "narrate/xml.hpp"

namespace narrate {
namespace {

[[noreturn]] void malformed(const std::string& why) {
  throw Error(ErrorCode::MalformedOpf, "package document: " + why);
}

xml::Node* first_child_element(xml::Node& parent, std::string_view local) {
  for (const auto& child : parent.children()) {
    if (child->is_element() && child->local_name() == local) return child.get();
  }
  return nullptr;
}

std::string trimmed(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\n' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\n' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return std::string(s.substr(b, e - b));
}

struct ParsedOpf {
  xml::Document doc;
  xml::Node* package = nullptr;
  xml::Node* metadata = nullptr;
  xml::Node* manifest = nullptr;
  xml::Node* spine = nullptr;
};

ParsedOpf parse_structure(std::string_view bytes) {
  ParsedOpf out;
  try {
    out.doc = xml::parse(bytes);
  } catch (const xml::ParseError& e) {
    malformed(std::string("not well-formed: ") + e.what());
  }
  out.package = &out.doc.document_element();
  if (out.package->local_name() != "package") malformed("root element is not <package>");
  out.metadata = first_child_element(*out.package, "metadata");
  out.manifest = first_child_element(*out.package, "manifest");
  out.spine = first_child_element(*out.package, "spine");
  if (out.manifest == nullptr) malformed("missing <manifest>");
  if (out.spine == nullptr) malformed("missing <spine>");
  return out;
}

// Inserts `node` as the last element child of `parent`, copying the
// indentation used before the previous element so the output stays tidy.
void append_indented(xml::Node& parent, std::unique_ptr<xml::Node> node) {
  std::string indent = "\n";
  std::size_t insert_at = parent.child_count();
  if (insert_at > 0 && parent.child(insert_at - 1).kind() == xml::NodeKind::Text &&
      utf8::is_blank(parent.child(insert_at - 1).text())) {
    --insert_at;
  }
  for (std::size_t i = insert_at; i-- > 0;) {
    if (parent.child(i).is_element()) {
      if (i > 0 && parent.child(i - 1).kind() == xml::NodeKind::Text &&
          utf8::is_blank(parent.child(i - 1).text())) {
        const std::string& ws = parent.child(i - 1).text();
        const auto nl = ws.rfind('\n');
        indent = nl == std::string::npos ? ws : ws.substr(nl);
      }
      break;
    }
  }
  parent.insert_child(insert_at, xml::make_text(indent));
  parent.insert_child(insert_at + 1, std::move(node));
}

}  // namespace

const ManifestItem* PackageDoc::item(std::string_view id) const {
  for (const auto& it : manifest) {
    if (it.id == id) return &it;
  }
  return nullptr;
}

ManifestItem* PackageDoc::item(std::string_view id) {
  for (auto& it : manifest) {
    if (it.id == id) return &it;
  }
  return nullptr;
}

std::string PackageDoc::opf_directory() const { return archive_path::directory(opf_path); }

std::string PackageDoc::resolve(const ManifestItem& it) const {
  return archive_path::resolve(opf_directory(), it.href);
}

const ManifestItem* PackageDoc::item_at(std::string_view archive_path) const {
  for (const auto& it : manifest) {
    if (resolve(it) == archive_path) return &it;
  }
  return nullptr;
}

std::string PackageDoc::unique_id(std::string_view base) const {
  std::string candidate(base);
  for (int n = 2; item(candidate) != nullptr; ++n) {
    candidate = std::string(base) + "_" + std::to_string(n);
  }
  return candidate;
}

PackageDoc parse_package_xml(std::string_view opf_bytes, std::string_view opf_path) {
  ParsedOpf parsed = parse_structure(opf_bytes);
  PackageDoc pkg;
  pkg.opf_path = std::string(opf_path);
  pkg.version = parsed.package->attribute("version").value_or("");

  if (parsed.metadata != nullptr) {
    parsed.metadata->walk([&](xml::Node& n) {
      if (!n.is_element() || &n == parsed.metadata) return true;
      if (n.local_name() == "meta") {
        if (auto property = n.attribute("property")) {
          MetaRecord rec;
          rec.property = *property;
          rec.refines = n.attribute("refines");
          rec.value = trimmed(xml::text_content(n));
          pkg.metadata.push_back(std::move(rec));
        } else if (auto name = n.attribute("name")) {
          pkg.metadata.push_back({*name, std::nullopt, n.attribute("content").value_or("")});
        }
      } else if (n.name().rfind("dc:", 0) == 0) {
        pkg.metadata.push_back({n.name(), std::nullopt, trimmed(xml::text_content(n))});
      }
      return false;
    });
  }

  std::set<std::string> resolved_hrefs;
  for (const auto& child : parsed.manifest->children()) {
    if (!child->is_element() || child->local_name() != "item") continue;
    ManifestItem it;
    auto id = child->attribute("id");
    auto href = child->attribute("href");
    if (!id || !href) malformed("manifest item without id or href");
    it.id = *id;
    it.href = *href;
    it.media_type = child->attribute("media-type").value_or("");
    it.media_overlay = child->attribute("media-overlay");
    it.properties = child->attribute("properties");
    if (pkg.item(it.id) != nullptr) malformed("duplicate manifest id " + it.id);
    if (!resolved_hrefs.insert(pkg.resolve(it)).second) {
      malformed("duplicate manifest href " + it.href);
    }
    pkg.manifest.push_back(std::move(it));
  }

  for (const auto& child : parsed.spine->children()) {
    if (!child->is_element() || child->local_name() != "itemref") continue;
    auto idref = child->attribute("idref");
    if (!idref) malformed("itemref without idref");
    if (pkg.item(*idref) == nullptr) {
      throw Error(ErrorCode::DanglingSpineRef, "spine itemref '" + *idref + "' has no manifest item");
    }
    pkg.spine.push_back(*idref);
  }

  for (const auto& it : pkg.manifest) {
    if (!it.media_overlay) continue;
    const ManifestItem* overlay = pkg.item(*it.media_overlay);
    if (overlay == nullptr || overlay->media_type != kSmilMediaType) {
      malformed("media-overlay of " + it.id + " does not name a SMIL item");
    }
  }
  return pkg;
}

PackageDoc parse_package(const ContainerModel& model) {
  return parse_package_xml(model.bytes(model.opf_path()), model.opf_path());
}

std::string render_package(std::string_view original_opf, const PackageDoc& updated) {
  const PackageDoc original = parse_package_xml(original_opf, updated.opf_path);
  ParsedOpf parsed = parse_structure(original_opf);

  if (updated.version != original.version) {
    parsed.package->set_attribute("version", updated.version);
  }

  std::map<std::string, xml::Node*> item_nodes;
  for (const auto& child : parsed.manifest->children()) {
    if (child->is_element() && child->local_name() == "item") {
      item_nodes.emplace(child->attribute("id").value_or(""), child.get());
    }
  }
  const std::string item_tag =
      item_nodes.empty() ? std::string("item") : item_nodes.begin()->second->name();
  for (const auto& it : updated.manifest) {
    const auto found = item_nodes.find(it.id);
    if (found != item_nodes.end()) {
      const ManifestItem* before = original.item(it.id);
      if (before != nullptr && before->media_overlay != it.media_overlay && it.media_overlay) {
        found->second->set_attribute("media-overlay", *it.media_overlay);
      }
      continue;
    }
    std::vector<std::pair<std::string, std::string>> attrs{
        {"id", it.id}, {"href", it.href}, {"media-type", it.media_type}};
    if (it.media_overlay) attrs.emplace_back("media-overlay", *it.media_overlay);
    if (it.properties) attrs.emplace_back("properties", *it.properties);
    append_indented(*parsed.manifest, xml::make_element(item_tag, std::move(attrs), true));
  }

  // Metadata present in `updated` beyond the original multiset is appended.
  std::vector<MetaRecord> remaining = original.metadata;
  std::vector<const MetaRecord*> additions;
  for (const auto& rec : updated.metadata) {
    auto it = std::find(remaining.begin(), remaining.end(), rec);
    if (it != remaining.end()) remaining.erase(it);
    else additions.push_back(&rec);
  }
  if (!additions.empty()) {
    if (parsed.metadata == nullptr) malformed("missing <metadata>");
    const std::string prefix = parsed.package->name().find(':') != std::string::npos
                                   ? parsed.package->name().substr(0, parsed.package->name().find(':') + 1)
                                   : std::string();
    for (const MetaRecord* rec : additions) {
      std::vector<std::pair<std::string, std::string>> attrs{{"property", rec->property}};
      if (rec->refines) attrs.emplace_back("refines", *rec->refines);
      auto meta = xml::make_element(prefix + "meta", std::move(attrs), false);
      meta->append_child(xml::make_text(rec->value));
      append_indented(*parsed.metadata, std::move(meta));
    }
  }
  return xml::serialize(parsed.doc);
}

}  // namespace narrate
