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
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

// A small XML DOM that remembers the source bytes of every node it parsed.
// Serializing an unmodified tree reproduces the input exactly; edits only
// regenerate the nodes they touch.
namespace narrate::xml {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t offset)
      : std::runtime_error(message + " at byte " + std::to_string(offset)),
        offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

enum class NodeKind {
  Document,
  Element,
  Text,
  CData,
  Comment,
  ProcessingInstruction,
  Doctype,
};

struct Attribute {
  std::string name;
  std::string value;      // entity-decoded
  std::string raw_value;  // as written between the quotes
  char quote = '"';
};

class Node {
 public:
  explicit Node(NodeKind kind) : kind_(kind) {}
  Node(const Node&) = delete;
  Node& operator=(const Node&) = delete;

  NodeKind kind() const noexcept { return kind_; }
  bool is_element() const noexcept { return kind_ == NodeKind::Element; }
  bool is_text() const noexcept {
    return kind_ == NodeKind::Text || kind_ == NodeKind::CData;
  }

  // Qualified name for elements, target for processing instructions.
  const std::string& name() const noexcept { return name_; }
  // Name with any namespace prefix removed.
  std::string_view local_name() const noexcept;

  // Decoded character data of Text/CData nodes.
  const std::string& text() const noexcept { return text_; }

  const std::vector<Attribute>& attributes() const noexcept { return attributes_; }
  const Attribute* find_attribute(std::string_view name) const noexcept;
  std::optional<std::string> attribute(std::string_view name) const;
  // Adds or replaces an attribute; the start tag is regenerated on output.
  void set_attribute(std::string_view name, std::string_view value);

  Node* parent() const noexcept { return parent_; }
  const std::vector<std::unique_ptr<Node>>& children() const noexcept {
    return children_;
  }
  std::size_t child_count() const noexcept { return children_.size(); }
  Node& child(std::size_t i) const { return *children_.at(i); }
  std::size_t index_in_parent() const;

  Node& append_child(std::unique_ptr<Node> node);
  Node& insert_child(std::size_t index, std::unique_ptr<Node> node);
  std::unique_ptr<Node> remove_child(std::size_t index);

  // Splits a Text/CData node so that the first `offset` decoded bytes stay in
  // this node and the remainder moves to a new following sibling. The offset
  // is rounded up to the next character reference boundary when the raw
  // source encodes the split point inside an entity.
  Node& split_text(std::size_t offset);

  // Calls `fn` on this node and every descendant in document order. Returning
  // false from `fn` skips the node's subtree.
  void walk(const std::function<bool(Node&)>& fn);

  // First element in document order whose id attribute equals `id`.
  Node* find_by_id(std::string_view id);

 private:
  friend class Parser;
  friend std::unique_ptr<Node> make_element(
      std::string, std::vector<std::pair<std::string, std::string>>, bool);
  friend std::unique_ptr<Node> make_text(std::string);
  friend void serialize_into(const Node&, std::string&);

  NodeKind kind_;
  std::string name_;
  std::vector<Attribute> attributes_;
  std::string text_;
  std::string raw_;      // full node source; for elements, the start tag
  std::string raw_end_;  // element end tag as written
  bool self_closing_ = false;
  bool start_tag_dirty_ = false;
  Node* parent_ = nullptr;
  std::vector<std::unique_ptr<Node>> children_;
};

std::unique_ptr<Node> make_element(
    std::string name, std::vector<std::pair<std::string, std::string>> attributes,
    bool self_closing);
inline std::unique_ptr<Node> make_element(std::string name) {
  return make_element(std::move(name), {}, false);
}
std::unique_ptr<Node> make_text(std::string text);

class Document {
 public:
  Document() : root_(std::make_unique<Node>(NodeKind::Document)) {}

  Node& root() noexcept { return *root_; }
  const Node& root() const noexcept { return *root_; }
  // The single top-level element.
  Node& document_element() const;

 private:
  friend class Parser;
  std::unique_ptr<Node> root_;
};

Document parse(std::string_view source);

void serialize_into(const Node& node, std::string& out);
std::string serialize(const Node& node);
inline std::string serialize(const Document& doc) { return serialize(doc.root()); }

// Concatenated decoded character data of every Text/CData descendant.
std::string text_content(const Node& node);

std::string escape_text(std::string_view text);
std::string escape_attribute(std::string_view text);
// Resolves predefined, numeric and common HTML character references.
// Unknown references are kept literally.
std::string decode_entities(std::string_view raw);

}  // namespace narrate::xml
