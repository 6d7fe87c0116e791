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

#include "narrate/container.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "narrate/error.hpp"
#include "narrate/xml.hpp"

namespace narrate {
namespace {

constexpr std::string_view kContainerXml = "META-INF/container.xml";

std::string locate_package(const std::string& container_xml) {
  xml::Document doc;
  try {
    doc = xml::parse(container_xml);
  } catch (const xml::ParseError& e) {
    throw Error(ErrorCode::MissingContainerXml,
                std::string("META-INF/container.xml is not well-formed: ") + e.what());
  }
  std::string fallback;
  std::string preferred;
  doc.root().walk([&](xml::Node& n) {
    if (n.is_element() && n.local_name() == "rootfile") {
      const auto full_path = n.attribute("full-path");
      if (full_path && !full_path->empty()) {
        if (fallback.empty()) fallback = *full_path;
        if (preferred.empty() && n.attribute("media-type") == "application/oebps-package+xml") {
          preferred = *full_path;
        }
      }
    }
    return true;
  });
  if (!preferred.empty()) return preferred;
  if (!fallback.empty()) return fallback;
  throw Error(ErrorCode::MissingContainerXml, "META-INF/container.xml names no rootfile");
}

}  // namespace

ContainerModel ContainerModel::from_entries(std::vector<zip::Entry> entries) {
  ContainerModel model;
  model.entries_ = std::move(entries);
  for (std::size_t i = 0; i < model.entries_.size(); ++i) {
    model.index_.emplace(model.entries_[i].name, i);
  }
  const std::string* mimetype = model.find("mimetype");
  if (mimetype == nullptr) {
    throw Error(ErrorCode::MissingMimetype, "archive has no mimetype entry");
  }
  if (*mimetype != kEpubMimetype) {
    throw Error(ErrorCode::MissingMimetype, "mimetype entry is not exactly application/epub+zip");
  }
  const std::string* container_xml = model.find(kContainerXml);
  if (container_xml == nullptr) {
    throw Error(ErrorCode::MissingContainerXml, "archive has no META-INF/container.xml");
  }
  model.opf_path_ = archive_path::resolve("", locate_package(*container_xml));
  if (!model.contains(model.opf_path_)) {
    throw Error(ErrorCode::MalformedOpf, "package document " + model.opf_path_ + " is missing");
  }
  return model;
}

bool ContainerModel::contains(std::string_view path) const {
  return index_.find(std::string(path)) != index_.end();
}

const std::string* ContainerModel::find(std::string_view path) const {
  const auto it = index_.find(std::string(path));
  return it == index_.end() ? nullptr : &entries_[it->second].data;
}

const std::string& ContainerModel::bytes(std::string_view path) const {
  if (const std::string* data = find(path)) return *data;
  throw Error(ErrorCode::IoFailure, "no archive entry " + std::string(path));
}

std::vector<std::string> ContainerModel::paths() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.name);
  return out;
}

void ContainerModel::put(std::string_view path, std::string data) {
  std::string key(path);
  if (const auto it = index_.find(key); it != index_.end()) {
    entries_[it->second].data = std::move(data);
    if (added_.count(key) == 0) modified_.insert(key);
    return;
  }
  zip::Entry entry;
  entry.name = key;
  entry.data = std::move(data);
  index_.emplace(key, entries_.size());
  entries_.push_back(std::move(entry));
  added_.insert(std::move(key));
}

ContainerModel read_container(std::string_view image) {
  return ContainerModel::from_entries(zip::read_archive(image));
}

ContainerModel open_container(const std::filesystem::path& file) {
  return read_container(read_file(file));
}

std::string serialize_container(const ContainerModel& model) {
  std::vector<zip::Entry> ordered;
  ordered.reserve(model.entries().size());
  for (const auto& e : model.entries()) {
    if (e.name == "mimetype") ordered.insert(ordered.begin(), e);
    else ordered.push_back(e);
  }
  for (auto& e : ordered) {
    e.stored = e.name == "mimetype" || (!e.name.empty() && e.name.back() == '/');
  }
  return zip::write_archive(ordered);
}

void write_container(const ContainerModel& model, const std::filesystem::path& out) {
  write_file(out, serialize_container(model));
}

std::string read_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + file.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::IoFailure, "cannot read " + file.string());
  return std::move(buffer).str();
}

void write_file(const std::filesystem::path& file, std::string_view data) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot create " + file.string());
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  out.close();
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + file.string());
}

namespace archive_path {

std::string directory(std::string_view path) {
  const auto slash = path.rfind('/');
  return slash == std::string_view::npos ? std::string() : std::string(path.substr(0, slash + 1));
}

std::string filename(std::string_view path) {
  const auto slash = path.rfind('/');
  return std::string(slash == std::string_view::npos ? path : path.substr(slash + 1));
}

std::string stem(std::string_view path) {
  std::string name = filename(path);
  const auto dot = name.rfind('.');
  if (dot != std::string::npos && dot > 0) name.resize(dot);
  return name;
}

std::string percent_decode(std::string_view text) {
  const auto hex = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '%' && i + 2 < text.size()) {
      const int hi = hex(text[i + 1]);
      const int lo = hex(text[i + 2]);
      if (hi >= 0 && lo >= 0) {
        out.push_back(static_cast<char>(hi * 16 + lo));
        i += 2;
        continue;
      }
    }
    out.push_back(text[i]);
  }
  return out;
}

std::string resolve(std::string_view base_dir, std::string_view href) {
  if (const auto hash = href.find('#'); hash != std::string_view::npos) href = href.substr(0, hash);
  const std::string decoded = percent_decode(href);
  std::string joined;
  if (!decoded.empty() && decoded.front() == '/') {
    joined = decoded.substr(1);
  } else {
    joined = std::string(base_dir) + decoded;
  }
  std::vector<std::string> segments;
  std::size_t start = 0;
  while (start <= joined.size()) {
    auto end = joined.find('/', start);
    if (end == std::string::npos) end = joined.size();
    const std::string seg = joined.substr(start, end - start);
    if (seg == "..") {
      if (!segments.empty()) segments.pop_back();
    } else if (!seg.empty() && seg != ".") {
      segments.push_back(seg);
    }
    start = end + 1;
  }
  std::string out;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (i > 0) out += '/';
    out += segments[i];
  }
  return out;
}

std::string relative(std::string_view from_dir, std::string_view to_path) {
  const auto split = [](std::string_view p) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (start < p.size()) {
      auto end = p.find('/', start);
      if (end == std::string_view::npos) end = p.size();
      if (end > start) parts.emplace_back(p.substr(start, end - start));
      start = end + 1;
    }
    return parts;
  };
  const auto from = split(from_dir);
  const auto to = split(to_path);
  std::size_t common = 0;
  while (common < from.size() && common + 1 < to.size() && from[common] == to[common]) ++common;
  std::string out;
  for (std::size_t i = common; i < from.size(); ++i) out += "../";
  for (std::size_t i = common; i < to.size(); ++i) {
    out += to[i];
    if (i + 1 < to.size()) out += '/';
  }
  return out;
}

std::string percent_encode(std::string_view path) {
  static constexpr std::string_view kKeep = "-._~/!$&'()*+,;=:@";
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (const char ch : path) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c) != 0 || kKeep.find(ch) != std::string_view::npos) {
      out += ch;
    } else {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 0xF];
    }
  }
  return out;
}

std::string href(std::string_view from_dir, std::string_view to_path) {
  return percent_encode(relative(from_dir, to_path));
}

}  // namespace archive_path
}  // namespace narrate
