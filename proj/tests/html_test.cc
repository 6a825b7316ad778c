/*
 * Copyright 2026 The vprex Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "vprex/html.h"

#include <gtest/gtest.h>

namespace vprex {
namespace {

// Tag/text outline of a subtree: tag(child,child) and "text" leaves.
std::string Shape(const DomNode& n) {
  if (n.is_text()) return "'" + n.text + "'";
  std::string out = n.tag;
  if (!n.children.empty()) {
    out += "(";
    for (size_t i = 0; i < n.children.size(); ++i) {
      if (i) out += ",";
      out += Shape(*n.children[i]);
    }
    out += ")";
  }
  return out;
}

TEST(HtmlParse, SimpleParagraph) {
  const auto dom = ParseHtml("<p>hi</p>");
  EXPECT_EQ(Shape(*dom), "html(head,body(p('hi')))");
}

TEST(HtmlParse, EmptyInputYieldsSkeleton) {
  EXPECT_EQ(Shape(*ParseHtml("")), "html(head,body)");
}

TEST(HtmlParse, ParagraphAutoCloses) {
  // html5lib builds body > div > (p > a, p > b) for this input.
  const auto dom = ParseHtml("<div><p>a<p>b</div>");
  EXPECT_EQ(Shape(*Body(*dom)), "body(div(p('a'),p('b')))");
}

TEST(HtmlParse, ListItemsAutoClose) {
  const auto dom = ParseHtml("<ul><li>a<li>b</ul>");
  EXPECT_EQ(Shape(*Body(*dom)), "body(ul(li('a'),li('b')))");
}

TEST(HtmlParse, StrayEndTagsAreIgnored) {
  const auto dom = ParseHtml("<div>x</span></p></div><p>y");
  EXPECT_EQ(Shape(*Body(*dom)), "body(div('x'),p('y'))");
}

TEST(HtmlParse, ScriptAndStyleKeepRawText) {
  const auto dom = ParseHtml("<script>if (a<b) x='</div>';</script><style>p{}</style><p>t</p>");
  const DomNode* script = FindFirst(*dom, "script");
  ASSERT_NE(script, nullptr);
  EXPECT_TRUE(script->children.empty());
  EXPECT_EQ(script->text, "if (a<b) x='</div>';");
  EXPECT_EQ(FindFirst(*dom, "style")->text, "p{}");
  EXPECT_NE(FindFirst(*dom, "p"), nullptr);
}

TEST(HtmlParse, AttributesAreLowercasedAndDecoded) {
  const auto dom = ParseHtml(R"(<A HREF="/x?a=1&amp;b=2" Data-Src='y' checked>t</A>)");
  const DomNode* a = FindFirst(*dom, "a");
  ASSERT_NE(a, nullptr);
  EXPECT_EQ(*a->Attr("href"), "/x?a=1&b=2");
  EXPECT_EQ(*a->Attr("data-src"), "y");
  EXPECT_TRUE(a->HasAttr("checked"));
}

TEST(HtmlParse, CommentsAndDoctypeAreDropped) {
  const auto dom = ParseHtml("<!DOCTYPE html><!-- <p>no</p> --><p>yes</p>");
  EXPECT_EQ(Shape(*Body(*dom)), "body(p('yes'))");
}

TEST(HtmlParse, ParentPointersAreSet) {
  const auto dom = ParseHtml("<div><span>x</span></div>");
  const DomNode* span = FindFirst(*dom, "span");
  ASSERT_NE(span->parent, nullptr);
  EXPECT_EQ(span->parent->tag, "div");
  EXPECT_EQ(span->parent->parent->tag, "body");
}

TEST(HtmlEntities, NamedAndNumeric) {
  EXPECT_EQ(DecodeEntities("a&amp;b &lt;&gt; &#36;5 &#x20AC;"), "a&b <> $5 \xE2\x82\xAC");
  EXPECT_EQ(DecodeEntities("&nbsp;"), "\xC2\xA0");
  EXPECT_EQ(DecodeEntities("&bogus; & alone"), "&bogus; & alone");
}

TEST(HtmlText, OwnTextSkipsChildElements) {
  const auto dom = ParseHtml("<div>  Own <b>bold</b>\n text\xC2\xA0 </div>");
  EXPECT_EQ(OwnText(*FindFirst(*dom, "div")), "Own text");
}

TEST(HtmlText, CollapseWhitespace) {
  EXPECT_EQ(CollapseWhitespace("  a \t\n b\xC2\xA0\xC2\xA0" "c  "), "a b c");
  EXPECT_EQ(CollapseWhitespace(""), "");
}

TEST(HtmlXpath, RoundTrip) {
  const auto dom = ParseHtml("<div></div><div><span>a</span><b>b</b><span>c</span></div>");
  std::vector<const DomNode*> all;
  ForEachElement(*dom, [&](const DomNode& n) { all.push_back(&n); });
  for (const DomNode* n : all) EXPECT_EQ(ResolveXpath(*dom, DomXpath(*n)), n);
  const DomNode* second_span = FindFirst(*dom, "b")->parent->children[2].get();
  EXPECT_EQ(DomXpath(*second_span), "/html[1]/body[1]/div[2]/span[2]");
  EXPECT_EQ(ResolveXpath(*dom, "/html[1]/body[1]/div[3]"), nullptr);
  EXPECT_EQ(ResolveXpath(*dom, "not an xpath"), nullptr);
}

}  // namespace
}  // namespace vprex
