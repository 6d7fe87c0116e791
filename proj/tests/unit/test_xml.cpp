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

#include <gtest/gtest.h>

#include "narrate/xml.hpp"

namespace narrate::xml {
namespace {

TEST(Xml, UnmodifiedTreeSerializesToInputBytes) {
  const std::string src =
      "<?xml version='1.0' encoding='utf-8'?>\n<!DOCTYPE html>\n"
      "<html  xmlns=\"http://www.w3.org/1999/xhtml\">\n<!-- c -->\n"
      "<body class = 'x'  ><p a=\"1\" b='&amp;2'>One &amp; two&#160;<br/><![CDATA[<raw>]]></p>"
      "<?pi data?><img src=\"a.png\" /></body></html>\n";
  EXPECT_EQ(serialize(parse(src)), src);
}

TEST(Xml, AttributesDecodeAndKeepOrder) {
  const Document doc = parse(R"(<r z="1" a="&lt;&#x41;&quot;" m='q'/>)");
  const Node& r = doc.document_element();
  ASSERT_EQ(r.attributes().size(), 3u);
  EXPECT_EQ(r.attributes()[0].name, "z");
  EXPECT_EQ(r.attributes()[1].value, "<A\"");
  EXPECT_EQ(r.attributes()[2].quote, '\'');
  EXPECT_EQ(r.attribute("missing"), std::nullopt);
}

TEST(Xml, SetAttributeRegeneratesOnlyStartTag) {
  Document doc = parse("<r>\n  <item id=\"a\"   href='x'/>\n  <item id=\"b\"/>\n</r>");
  doc.document_element().child(1).set_attribute("media-overlay", "s&1");
  EXPECT_EQ(serialize(doc), "<r>\n  <item id=\"a\" href='x' media-overlay=\"s&amp;1\"/>\n  <item id=\"b\"/>\n</r>");
}

TEST(Xml, SplitTextAcrossEntity) {
  Document doc = parse("<p>a&amp;b c</p>");
  Node& text = doc.document_element().child(0);
  EXPECT_EQ(text.text(), "a&b c");
  Node& tail = text.split_text(3);
  EXPECT_EQ(text.text(), "a&b");
  EXPECT_EQ(tail.text(), " c");
  EXPECT_EQ(serialize(doc), "<p>a&amp;b c</p>");
}

TEST(Xml, InsertedElementsSerialize) {
  Document doc = parse("<p>x</p>");
  Node& p = doc.document_element();
  Node& span = p.insert_child(0, make_element("span", {{"id", "s1"}}, false));
  span.append_child(p.remove_child(1));
  EXPECT_EQ(serialize(doc), "<p><span id=\"s1\">x</span></p>");
}

TEST(Xml, SelfClosingElementReopensWhenGivenChildren) {
  Document doc = parse("<head/>");
  doc.document_element().append_child(make_element("link", {{"href", "a.css"}}, true));
  EXPECT_EQ(serialize(doc), "<head><link href=\"a.css\"/></head>");
}

TEST(Xml, TextContentAndFindById) {
  Document doc = parse("<a><b id=\"x\">1<c>2</c></b><d xml:id=\"y\">3</d></a>");
  EXPECT_EQ(text_content(doc.root()), "123");
  ASSERT_NE(doc.root().find_by_id("x"), nullptr);
  EXPECT_EQ(doc.root().find_by_id("y")->name(), "d");
  EXPECT_EQ(doc.root().find_by_id("z"), nullptr);
}

TEST(Xml, Entities) {
  EXPECT_EQ(decode_entities("&lt;&gt;&amp;&apos;&quot;&#65;&#x42;&nbsp;&mdash;&bogus;"),
            "<>&'\"AB —&bogus;");
  EXPECT_EQ(escape_text("a<b&c>"), "a&lt;b&amp;c&gt;");
  EXPECT_EQ(escape_attribute("\"<&"), "&quot;&lt;&amp;");
}

TEST(Xml, RejectsMalformedInput) {
  for (const char* bad : {"<a><b></a>", "<a>", "<a x='1' x='2'/>", "<a/><b/>", "", "text<a/>", "<a></a>junk"}) {
    EXPECT_THROW(parse(bad), ParseError) << bad;
  }
}

TEST(Xml, WalkCanSkipSubtrees) {
  Document doc = parse("<a><skip><x/></skip><y/></a>");
  std::vector<std::string> seen;
  doc.root().walk([&](Node& n) {
    if (n.is_element()) seen.push_back(n.name());
    return n.name() != "skip";
  });
  EXPECT_EQ(seen, (std::vector<std::string>{"a", "skip", "y"}));
}

}  // namespace
}  // namespace narrate::xml
