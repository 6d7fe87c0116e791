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

#include "narrate/xml.hpp"

#include <algorithm>
#include <array>
#include <charconv>

#include "narrate/utf8.hpp"

namespace narrate::xml {
namespace {

struct NamedEntity {
  std::string_view name;
  char32_t cp;
};

// Predefined XML entities plus the HTML ones that show up in EPUB 2 content
// documents carrying the XHTML DTD.
constexpr std::array<NamedEntity, 34> kNamedEntities{{
    {"amp", '&'},        {"lt", '<'},          {"gt", '>'},
    {"quot", '"'},       {"apos", '\''},       {"nbsp", 0x00A0},
    {"ensp", 0x2002},    {"emsp", 0x2003},     {"thinsp", 0x2009},
    {"ndash", 0x2013},   {"mdash", 0x2014},    {"lsquo", 0x2018},
    {"rsquo", 0x2019},   {"sbquo", 0x201A},    {"ldquo", 0x201C},
    {"rdquo", 0x201D},   {"bdquo", 0x201E},    {"hellip", 0x2026},
    {"laquo", 0x00AB},   {"raquo", 0x00BB},    {"copy", 0x00A9},
    {"reg", 0x00AE},     {"trade", 0x2122},    {"shy", 0x00AD},
    {"deg", 0x00B0},     {"middot", 0x00B7},   {"eacute", 0x00E9},
    {"egrave", 0x00E8},  {"agrave", 0x00E0},   {"ccedil", 0x00E7},
    {"uuml", 0x00FC},    {"ouml", 0x00F6},     {"auml", 0x00E4},
    {"szlig", 0x00DF},
}};

// Decodes the reference starting at raw[pos] == '&'. Returns the number of
// raw bytes consumed, or 0 when the text is not a recognizable reference.
std::size_t decode_reference(std::string_view raw, std::size_t pos, std::string& out) {
  const std::size_t semi = raw.find(';', pos + 1);
  if (semi == std::string_view::npos || semi - pos > 12) return 0;
  const std::string_view body = raw.substr(pos + 1, semi - pos - 1);
  if (body.empty()) return 0;
  if (body[0] == '#') {
    std::uint32_t value = 0;
    const char* first = body.data() + 1;
    const char* last = body.data() + body.size();
    int base = 10;
    if (body.size() > 1 && (body[1] == 'x' || body[1] == 'X')) {
      base = 16;
      ++first;
    }
    const auto [ptr, ec] = std::from_chars(first, last, value, base);
    if (ec != std::errc() || ptr != last || first == last || value > 0x10FFFF) return 0;
    utf8::append(out, value);
    return semi - pos + 1;
  }
  for (const auto& entity : kNamedEntities) {
    if (entity.name == body) {
      utf8::append(out, entity.cp);
      return semi - pos + 1;
    }
  }
  return 0;
}

bool is_name_char(char c) {
  return !(c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '/' ||
           c == '>' || c == '=' || c == '<' || c == '"' || c == '\'');
}

bool is_ws(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

}  // namespace

std::string decode_entities(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size();) {
    if (raw[i] == '&') {
      const std::size_t used = decode_reference(raw, i, out);
      if (used > 0) {
        i += used;
        continue;
      }
    }
    out.push_back(raw[i++]);
  }
  return out;
}

std::string escape_text(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string escape_attribute(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Node

std::string_view Node::local_name() const noexcept {
  std::string_view n = name_;
  const auto colon = n.find(':');
  return colon == std::string_view::npos ? n : n.substr(colon + 1);
}

const Attribute* Node::find_attribute(std::string_view name) const noexcept {
  for (const auto& a : attributes_) {
    if (a.name == name) return &a;
  }
  return nullptr;
}

std::optional<std::string> Node::attribute(std::string_view name) const {
  if (const Attribute* a = find_attribute(name)) return a->value;
  return std::nullopt;
}

void Node::set_attribute(std::string_view name, std::string_view value) {
  for (auto& a : attributes_) {
    if (a.name == name) {
      a.value = value;
      a.raw_value = escape_attribute(value);
      a.quote = '"';
      start_tag_dirty_ = true;
      return;
    }
  }
  attributes_.push_back({std::string(name), std::string(value), escape_attribute(value), '"'});
  start_tag_dirty_ = true;
}

std::size_t Node::index_in_parent() const {
  if (parent_ == nullptr) return 0;
  const auto& siblings = parent_->children_;
  for (std::size_t i = 0; i < siblings.size(); ++i) {
    if (siblings[i].get() == this) return i;
  }
  return siblings.size();
}

Node& Node::append_child(std::unique_ptr<Node> node) {
  return insert_child(children_.size(), std::move(node));
}

Node& Node::insert_child(std::size_t index, std::unique_ptr<Node> node) {
  if (self_closing_) {
    self_closing_ = false;
    start_tag_dirty_ = true;
  }
  node->parent_ = this;
  Node& ref = *node;
  children_.insert(children_.begin() + static_cast<std::ptrdiff_t>(index), std::move(node));
  return ref;
}

std::unique_ptr<Node> Node::remove_child(std::size_t index) {
  auto node = std::move(children_.at(index));
  children_.erase(children_.begin() + static_cast<std::ptrdiff_t>(index));
  node->parent_ = nullptr;
  return node;
}

Node& Node::split_text(std::size_t offset) {
  if (!is_text() || parent_ == nullptr) {
    throw std::logic_error("split_text requires a text node with a parent");
  }
  auto tail = std::make_unique<Node>(kind_);
  if (kind_ == NodeKind::CData) {
    offset = std::min(offset, text_.size());
    tail->text_ = text_.substr(offset);
    text_.resize(offset);
    raw_ = "<![CDATA[" + text_ + "]]>";
    tail->raw_ = "<![CDATA[" + tail->text_ + "]]>";
  } else {
    // Walk the raw source until the decoded position reaches the offset.
    std::size_t raw_pos = 0;
    std::size_t decoded = 0;
    std::string scratch;
    while (raw_pos < raw_.size() && decoded < offset) {
      std::size_t used = 0;
      if (raw_[raw_pos] == '&') {
        scratch.clear();
        used = decode_reference(raw_, raw_pos, scratch);
        if (used > 0) decoded += scratch.size();
      }
      if (used == 0) {
        used = 1;
        decoded += 1;
      }
      raw_pos += used;
    }
    tail->raw_ = raw_.substr(raw_pos);
    raw_.resize(raw_pos);
    text_ = decode_entities(raw_);
    tail->text_ = decode_entities(tail->raw_);
  }
  return parent_->insert_child(index_in_parent() + 1, std::move(tail));
}

void Node::walk(const std::function<bool(Node&)>& fn) {
  if (!fn(*this)) return;
  // Index-based so callers may append children while walking.
  for (std::size_t i = 0; i < children_.size(); ++i) children_[i]->walk(fn);
}

Node* Node::find_by_id(std::string_view id) {
  Node* found = nullptr;
  walk([&](Node& n) {
    if (found != nullptr) return false;
    if (n.is_element()) {
      const Attribute* a = n.find_attribute("id");
      if (a == nullptr) a = n.find_attribute("xml:id");
      if (a != nullptr && a->value == id) {
        found = &n;
        return false;
      }
    }
    return true;
  });
  return found;
}

std::unique_ptr<Node> make_element(std::string name,
                                   std::vector<std::pair<std::string, std::string>> attributes,
                                   bool self_closing) {
  auto node = std::make_unique<Node>(NodeKind::Element);
  node->name_ = std::move(name);
  for (auto& [key, value] : attributes) {
    node->attributes_.push_back({key, value, escape_attribute(value), '"'});
  }
  node->self_closing_ = self_closing;
  node->start_tag_dirty_ = true;
  return node;
}

std::unique_ptr<Node> make_text(std::string text) {
  auto node = std::make_unique<Node>(NodeKind::Text);
  node->raw_ = escape_text(text);
  node->text_ = std::move(text);
  return node;
}

Node& Document::document_element() const {
  for (const auto& child : root_->children()) {
    if (child->is_element()) return *child;
  }
  throw std::logic_error("document has no element");
}

// ---------------------------------------------------------------------------
// Parser

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  Document run() {
    Document doc;
    Node* current = doc.root_.get();
    bool seen_root = false;
    while (pos_ < src_.size()) {
      if (src_[pos_] != '<') {
        parse_text(*current);
        continue;
      }
      if (starts_with("<!--")) {
        add_raw(*current, NodeKind::Comment, "-->");
      } else if (starts_with("<![CDATA[")) {
        parse_cdata(*current);
      } else if (starts_with("<!")) {
        parse_doctype(*current);
      } else if (starts_with("<?")) {
        add_raw(*current, NodeKind::ProcessingInstruction, "?>");
      } else if (starts_with("</")) {
        current = parse_end_tag(current);
      } else {
        if (current == doc.root_.get()) {
          if (seen_root) fail("multiple document elements");
          seen_root = true;
        }
        current = parse_start_tag(*current);
      }
    }
    if (current != doc.root_.get()) {
      fail("unclosed element <" + current->name_ + ">");
    }
    if (!seen_root) fail("no document element");
    for (const auto& child : doc.root_->children()) {
      if (child->kind() == NodeKind::Text && !utf8::is_blank(child->text())) {
        fail("character data outside the document element");
      }
    }
    return doc;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  bool starts_with(std::string_view prefix) const {
    return src_.substr(pos_, prefix.size()) == prefix;
  }

  void parse_text(Node& parent) {
    const std::size_t end = std::min(src_.find('<', pos_), src_.size());
    auto node = std::make_unique<Node>(NodeKind::Text);
    node->raw_ = std::string(src_.substr(pos_, end - pos_));
    node->text_ = decode_entities(node->raw_);
    pos_ = end;
    parent.append_child(std::move(node));
  }

  void add_raw(Node& parent, NodeKind kind, std::string_view terminator) {
    const std::size_t end = src_.find(terminator, pos_ + 2);
    if (end == std::string_view::npos) fail("unterminated markup");
    const std::size_t stop = end + terminator.size();
    auto node = std::make_unique<Node>(kind);
    node->raw_ = std::string(src_.substr(pos_, stop - pos_));
    if (kind == NodeKind::ProcessingInstruction) {
      std::size_t i = pos_ + 2;
      while (i < end && is_name_char(src_[i]) && src_[i] != '?') ++i;
      node->name_ = std::string(src_.substr(pos_ + 2, i - pos_ - 2));
    }
    pos_ = stop;
    parent.append_child(std::move(node));
  }

  void parse_cdata(Node& parent) {
    const std::size_t begin = pos_ + 9;
    const std::size_t end = src_.find("]]>", begin);
    if (end == std::string_view::npos) fail("unterminated CDATA section");
    auto node = std::make_unique<Node>(NodeKind::CData);
    node->text_ = std::string(src_.substr(begin, end - begin));
    node->raw_ = std::string(src_.substr(pos_, end + 3 - pos_));
    pos_ = end + 3;
    parent.append_child(std::move(node));
  }

  void parse_doctype(Node& parent) {
    std::size_t i = pos_ + 2;
    int bracket = 0;
    char quote = 0;
    for (; i < src_.size(); ++i) {
      const char c = src_[i];
      if (quote != 0) {
        if (c == quote) quote = 0;
      } else if (c == '"' || c == '\'') {
        quote = c;
      } else if (c == '[') {
        ++bracket;
      } else if (c == ']') {
        --bracket;
      } else if (c == '>' && bracket <= 0) {
        break;
      }
    }
    if (i >= src_.size()) fail("unterminated declaration");
    auto node = std::make_unique<Node>(NodeKind::Doctype);
    node->raw_ = std::string(src_.substr(pos_, i + 1 - pos_));
    pos_ = i + 1;
    parent.append_child(std::move(node));
  }

  Node* parse_start_tag(Node& parent) {
    const std::size_t start = pos_;
    std::size_t i = pos_ + 1;
    const std::size_t name_begin = i;
    while (i < src_.size() && is_name_char(src_[i])) ++i;
    if (i == name_begin) fail("expected element name");
    auto node = std::make_unique<Node>(NodeKind::Element);
    node->name_ = std::string(src_.substr(name_begin, i - name_begin));

    for (;;) {
      while (i < src_.size() && is_ws(src_[i])) ++i;
      if (i >= src_.size()) {
        pos_ = i;
        fail("unterminated start tag");
      }
      if (src_[i] == '>') {
        ++i;
        break;
      }
      if (src_[i] == '/') {
        if (i + 1 >= src_.size() || src_[i + 1] != '>') {
          pos_ = i;
          fail("malformed empty-element tag");
        }
        node->self_closing_ = true;
        i += 2;
        break;
      }
      const std::size_t attr_begin = i;
      while (i < src_.size() && is_name_char(src_[i])) ++i;
      if (i == attr_begin) {
        pos_ = i;
        fail("expected attribute name");
      }
      Attribute attr;
      attr.name = std::string(src_.substr(attr_begin, i - attr_begin));
      while (i < src_.size() && is_ws(src_[i])) ++i;
      if (i >= src_.size() || src_[i] != '=') {
        pos_ = i;
        fail("expected '=' after attribute " + attr.name);
      }
      ++i;
      while (i < src_.size() && is_ws(src_[i])) ++i;
      if (i >= src_.size() || (src_[i] != '"' && src_[i] != '\'')) {
        pos_ = i;
        fail("expected quoted value for attribute " + attr.name);
      }
      attr.quote = src_[i];
      const std::size_t value_end = src_.find(attr.quote, i + 1);
      if (value_end == std::string_view::npos) {
        pos_ = i;
        fail("unterminated attribute value");
      }
      attr.raw_value = std::string(src_.substr(i + 1, value_end - i - 1));
      attr.value = decode_entities(attr.raw_value);
      if (node->find_attribute(attr.name) != nullptr) {
        pos_ = attr_begin;
        fail("duplicate attribute " + attr.name);
      }
      node->attributes_.push_back(std::move(attr));
      i = value_end + 1;
    }
    node->raw_ = std::string(src_.substr(start, i - start));
    pos_ = i;
    const bool self_closing = node->self_closing_;
    Node& ref = parent.append_child(std::move(node));
    return self_closing ? &parent : &ref;
  }

  Node* parse_end_tag(Node* current) {
    const std::size_t start = pos_;
    std::size_t i = pos_ + 2;
    const std::size_t name_begin = i;
    while (i < src_.size() && is_name_char(src_[i])) ++i;
    const std::string_view name = src_.substr(name_begin, i - name_begin);
    while (i < src_.size() && is_ws(src_[i])) ++i;
    if (i >= src_.size() || src_[i] != '>') fail("malformed end tag");
    if (current->kind() != NodeKind::Element || current->name_ != name) {
      fail("unexpected end tag </" + std::string(name) + ">");
    }
    current->raw_end_ = std::string(src_.substr(start, i + 1 - start));
    pos_ = i + 1;
    return current->parent_;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

Document parse(std::string_view source) { return Parser(source).run(); }

// ---------------------------------------------------------------------------
// Serialization

void serialize_into(const Node& node, std::string& out) {
  switch (node.kind_) {
    case NodeKind::Document:
      for (const auto& child : node.children_) serialize_into(*child, out);
      return;
    case NodeKind::Element: {
      const bool empty = node.self_closing_ && node.children_.empty();
      if (!node.start_tag_dirty_ && !node.raw_.empty()) {
        out += node.raw_;
      } else {
        out += '<';
        out += node.name_;
        for (const auto& a : node.attributes_) {
          out += ' ';
          out += a.name;
          out += '=';
          out += a.quote;
          out += a.raw_value;
          out += a.quote;
        }
        out += empty ? "/>" : ">";
      }
      if (empty) return;
      for (const auto& child : node.children_) serialize_into(*child, out);
      if (!node.raw_end_.empty()) {
        out += node.raw_end_;
      } else {
        out += "</";
        out += node.name_;
        out += '>';
      }
      return;
    }
    default:
      out += node.raw_;
      return;
  }
}

std::string serialize(const Node& node) {
  std::string out;
  serialize_into(node, out);
  return out;
}

std::string text_content(const Node& node) {
  std::string out;
  const std::function<void(const Node&)> visit = [&](const Node& n) {
    if (n.is_text()) {
      out += n.text();
      return;
    }
    for (const auto& child : n.children()) visit(*child);
  };
  visit(node);
  return out;
}

}  // namespace narrate::xml
