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

#include "vprex/style.h"

#include <gtest/gtest.h>

namespace vprex {
namespace {

const StyledNode* FindStyled(const StyledNode& n, const std::string& id) {
  if (n.node != nullptr && n.node->is_element()) {
    const std::string* a = n.node->Attr("id");
    if (a != nullptr && *a == id) return &n;
  }
  for (const StyledNode& c : n.children) {
    if (const StyledNode* f = FindStyled(c, id)) return f;
  }
  return nullptr;
}

ComputedStyle StyleOf(const std::string& html, const std::string& id) {
  static std::unique_ptr<DomNode> dom;
  dom = ParseHtml(html);
  const StyledNode root = ComputeStyles(*dom, kDefaultViewportWidth);
  const StyledNode* n = FindStyled(root, id);
  EXPECT_NE(n, nullptr) << id;
  return n == nullptr ? ComputedStyle{} : n->style;
}

TEST(Style, StrikeTagsAreLineThrough) {
  for (const char* tag : {"s", "strike", "del"}) {
    const std::string html = std::string("<") + tag + " id=t>x</" + tag + ">";
    EXPECT_TRUE(StyleOf(html, "t").line_through) << tag;
  }
  EXPECT_FALSE(StyleOf("<span id=t>x</span>", "t").line_through);
}

TEST(Style, LineThroughInheritsAndComesFromEveryRuleKind) {
  EXPECT_TRUE(StyleOf("<s><span id=t>x</span></s>", "t").line_through);
  EXPECT_TRUE(
      StyleOf("<style>span{text-decoration:line-through}</style><span id=t>x</span>", "t")
          .line_through);
  EXPECT_TRUE(
      StyleOf("<style>.o{text-decoration:line-through}</style><b class=o id=t>x</b>", "t")
          .line_through);
  EXPECT_TRUE(
      StyleOf("<style>#t{text-decoration:line-through}</style><b id=t>x</b>", "t").line_through);
  EXPECT_TRUE(StyleOf("<b id=t style='text-decoration: underline line-through'>x</b>", "t")
                  .line_through);
}

TEST(Style, FontSizeUnits) {
  EXPECT_DOUBLE_EQ(StyleOf("<div id=t style='font-size:2em'>x</div>", "t").font_size_px, 32.0);
  EXPECT_DOUBLE_EQ(
      StyleOf("<div style='font-size:20px'><b id=t style='font-size:150%'>x</b></div>", "t")
          .font_size_px,
      30.0);
  EXPECT_DOUBLE_EQ(
      StyleOf("<div style='font-size:10px'><b id=t style='font-size:2rem'>x</b></div>", "t")
          .font_size_px,
      32.0);
  EXPECT_DOUBLE_EQ(StyleOf("<b id=t style='font-size:small'>x</b>", "t").font_size_px, 13.0);
  EXPECT_DOUBLE_EQ(StyleOf("<b id=t style='font-size:medium'>x</b>", "t").font_size_px, 16.0);
  EXPECT_DOUBLE_EQ(StyleOf("<b id=t style='font-size:large'>x</b>", "t").font_size_px, 18.0);
  EXPECT_DOUBLE_EQ(
      StyleOf("<div style='font-size:20px'><b id=t style='font-size:nonsense'>x</b></div>", "t")
          .font_size_px,
      20.0);
}

TEST(Style, HeadingDefaults) {
  const double sizes[] = {32, 24, 19, 16, 13, 11};
  for (int i = 1; i <= 6; ++i) {
    const std::string tag = "h" + std::to_string(i);
    const ComputedStyle s = StyleOf("<" + tag + " id=t>x</" + tag + ">", "t");
    EXPECT_DOUBLE_EQ(s.font_size_px, sizes[i - 1]) << tag;
    EXPECT_EQ(s.display, ComputedStyle::Display::kBlock);
  }
}

TEST(Style, DefaultDisplay) {
  for (const char* tag : {"div", "p", "ul", "ol", "li", "section", "article", "header",
                          "footer", "main", "table", "tr"}) {
    const std::string html = std::string("<") + tag + " id=t>x</" + tag + ">";
    EXPECT_EQ(StyleOf(html, "t").display, ComputedStyle::Display::kBlock) << tag;
  }
  EXPECT_EQ(StyleOf("<span id=t>x</span>", "t").display, ComputedStyle::Display::kInline);
}

TEST(Style, SpecificityIdOverClassOverTag) {
  const std::string css =
      "<style>#t{font-size:30px} .c{font-size:20px} b{font-size:10px}</style>";
  EXPECT_DOUBLE_EQ(StyleOf(css + "<b class=c id=t>x</b>", "t").font_size_px, 30.0);
  EXPECT_DOUBLE_EQ(StyleOf(css + "<b class=c id=u><i id=v class=c>x</i></b>", "v").font_size_px,
                   20.0);
  EXPECT_DOUBLE_EQ(StyleOf(css + "<b id=w>x</b>", "w").font_size_px, 10.0);
}

TEST(Style, LaterRuleWinsTiesAndInlineBeatsSheets) {
  EXPECT_DOUBLE_EQ(
      StyleOf("<style>.a{font-size:10px} .a{font-size:12px}</style><b class=a id=t>x</b>", "t")
          .font_size_px,
      12.0);
  EXPECT_DOUBLE_EQ(
      StyleOf("<style>#t{font-size:10px}</style><b id=t style='font-size:14px'>x</b>", "t")
          .font_size_px,
      14.0);
}

TEST(Style, DisplayNoneIsFlagged) {
  EXPECT_EQ(StyleOf("<div id=t style='display:none'><p>x</p></div>", "t").display,
            ComputedStyle::Display::kNone);
  EXPECT_EQ(StyleOf("<div id=t style='visibility:hidden'>x</div>", "t").visibility,
            ComputedStyle::Visibility::kHidden);
}

TEST(Style, ImagePixelSizes) {
  const ComputedStyle s = StyleOf("<img id=t style='width:120px;height:80px'>", "t");
  EXPECT_EQ(s.width_px, 120.0);
  EXPECT_EQ(s.height_px, 80.0);
}

TEST(StyleSheet, UnsupportedSelectorsAndAtRulesAreSkipped) {
  const auto rules =
      ParseStylesheet("@media print { p { font-size: 1px } } div p { font-size: 2px } "
                      "p.a#b { font-size: 3px; color: red }");
  ASSERT_EQ(rules.size(), 1u);
  EXPECT_EQ(rules[0].tag, "p");
  EXPECT_EQ(rules[0].classes, std::vector<std::string>{"a"});
  EXPECT_EQ(rules[0].id, "b");
  EXPECT_EQ(rules[0].Specificity(), 10101);
}

TEST(StyleSheet, ImportantFlag) {
  const auto decls = ParseDeclarations("font-size: 10px !important; display:block;garbage");
  ASSERT_GE(decls.size(), 2u);
  EXPECT_TRUE(decls[0].important);
  EXPECT_EQ(decls[0].value, "10px");
  EXPECT_FALSE(decls[1].important);
}

TEST(StyleSheet, ParseFontSize) {
  EXPECT_EQ(ParseFontSize("12pt", 16), 16.0);
  EXPECT_EQ(ParseFontSize("0px", 16), std::nullopt);
  EXPECT_EQ(ParseFontSize("-3px", 16), std::nullopt);
  EXPECT_EQ(ParseFontSize("1.5em", 10), 15.0);
}

}  // namespace
}  // namespace vprex
