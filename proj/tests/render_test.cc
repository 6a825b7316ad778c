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

#include "vprex/render.h"

#include <gtest/gtest.h>

#include <filesystem>
#include <set>

#include "vprex/layout.h"
#include "vprex/text_util.h"
#include "vprex/vpr.h"

namespace fs = std::filesystem;

namespace vprex {
namespace {

const fs::path kFixtures = VPREX_FIXTURE_DIR;

std::vector<std::string> FixtureNames() {
  std::vector<std::string> out;
  for (const auto& e : fs::directory_iterator(kFixtures / "html")) {
    out.push_back(e.path().stem().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

VprDocument RenderFixture(const std::string& name) {
  return GenerateVpr("https://fixtures.vprex.test/" + name + ".html",
                     ReadFile((kFixtures / "html" / (name + ".html")).string()));
}

const TextElement* FindText(const VprDocument& d, const std::string& text) {
  for (const TextElement& t : d.text_elements) {
    if (t.text == text) return &t;
  }
  return nullptr;
}

TEST(Layout, RoundHalfUp) {
  EXPECT_EQ(RoundHalfUp(19.2), 19);
  EXPECT_EQ(RoundHalfUp(19.5), 20);
  EXPECT_EQ(RoundHalfUp(-0.5), 0);
  EXPECT_EQ(RoundHalfUp(38.4), 38);
}

TEST(Render, SingleWordGlyphModel) {
  // 5 glyphs x 8px, line height 1.2 x 16 = 19.2 -> 19.
  const VprDocument d = GenerateVpr("u", "<p style=\"font-size:16px\">hello</p>");
  ASSERT_EQ(d.text_elements.size(), 1u);
  EXPECT_EQ(d.text_elements[0].box, (BoundingBox{0, 0, 40, 19}));
  EXPECT_EQ(d.width, 1280);
  EXPECT_EQ(d.height, 19);
}

TEST(Render, SiblingBlocksStack) {
  const VprDocument d = GenerateVpr("u", "<div>one</div><div>two</div>");
  ASSERT_EQ(d.text_elements.size(), 2u);
  EXPECT_EQ(d.text_elements[0].box.y, 0);
  EXPECT_EQ(d.text_elements[1].box.y, 19);
}

TEST(Render, InlineRunsFlowAndWrap) {
  // 80px viewport holds 10 glyphs of 8px; "cccc" moves to the second line.
  const VprDocument d = GenerateVpr("u", "<p>aaaa bbbb cccc</p>", 80);
  ASSERT_EQ(d.text_elements.size(), 1u);
  const BoundingBox b = d.text_elements[0].box;
  EXPECT_EQ(b.x, 0);
  EXPECT_EQ(b.y, 0);
  EXPECT_EQ(b.width, 72);   // "aaaa bbbb"
  EXPECT_EQ(b.height, 38);  // two lines of 19.2
  EXPECT_EQ(d.text_elements[0].text, "aaaa bbbb cccc");
}

TEST(Render, InlineElementsFollowEachOther) {
  const VprDocument d = GenerateVpr("u", "<div><b>ab</b><i>cd</i></div>");
  ASSERT_EQ(d.text_elements.size(), 2u);
  EXPECT_EQ(d.text_elements[0].box.x, 0);
  EXPECT_EQ(d.text_elements[1].box.x, 16);
}

TEST(Render, HiddenSubtreesProduceNothing) {
  const VprDocument d = GenerateVpr(
      "u",
      "<p style='visibility:hidden'>a</p><div style='display:none'><p>b</p>"
      "<img src=x.png></div><p>c</p>");
  ASSERT_EQ(d.text_elements.size(), 1u);
  EXPECT_EQ(d.text_elements[0].text, "c");
  EXPECT_TRUE(d.image_elements.empty());
  // visibility:hidden still takes its line, display:none does not.
  EXPECT_EQ(d.text_elements[0].box.y, 19);
}

TEST(Render, ImageSizeFromAttributes) {
  const VprDocument d = GenerateVpr("u", "<img src='i.jpg' width=100 height=50>");
  ASSERT_EQ(d.image_elements.size(), 1u);
  EXPECT_EQ(d.image_elements[0].box.width, 100);
  EXPECT_EQ(d.image_elements[0].box.height, 50);
  EXPECT_EQ(d.image_elements[0].src, "i.jpg");
  EXPECT_FALSE(d.image_elements[0].size_unknown);
}

TEST(Render, UnsizedImageDefaultsAndIsFlagged) {
  const VprDocument d = GenerateVpr("u", "<img src='i.jpg'>");
  ASSERT_EQ(d.image_elements.size(), 1u);
  EXPECT_EQ(d.image_elements[0].box.width, 100);
  EXPECT_EQ(d.image_elements[0].box.height, 100);
  EXPECT_TRUE(d.image_elements[0].size_unknown);
}

TEST(Render, LazyImages) {
  const auto dom = ParseHtml(
      "<img id=a src=x loading=lazy><img id=b data-src=y><img id=c src=z data-src=w>");
  std::vector<const DomNode*> imgs;
  ForEachElement(*dom, [&](const DomNode& n) {
    if (n.tag == "img") imgs.push_back(&n);
  });
  ASSERT_EQ(imgs.size(), 3u);
  EXPECT_TRUE(IsLazyImage(*imgs[0]));
  EXPECT_TRUE(IsLazyImage(*imgs[1]));
  EXPECT_FALSE(IsLazyImage(*imgs[2]));
  EXPECT_EQ(ImageSource(*imgs[1]), "y");
  EXPECT_EQ(ImageSource(*imgs[2]), "z");
}

TEST(Render, LinkContainsItsImage) {
  const VprDocument d = GenerateVpr("u", "<a href=\"/x\"><img src=\"i.jpg\"></a>");
  ASSERT_EQ(d.action_elements.size(), 1u);
  ASSERT_EQ(d.image_elements.size(), 1u);
  const BoundingBox a = d.action_elements[0].box;
  const BoundingBox i = d.image_elements[0].box;
  EXPECT_EQ(d.action_elements[0].href, "/x");
  EXPECT_LE(a.x, i.x);
  EXPECT_LE(a.y, i.y);
  EXPECT_GE(a.x + a.width, i.x + i.width);
  EXPECT_GE(a.y + a.height, i.y + i.height);
}

TEST(Render, TitleAndXpathTreeAncestors) {
  const VprDocument d =
      GenerateVpr("u", "<title> The  title </title><div><div><span>x</span></div></div>");
  EXPECT_EQ(d.title, "The title");
  ASSERT_EQ(d.text_elements.size(), 1u);
  EXPECT_EQ(XpathString(d, d.text_elements[0].xpath_id), "/html[1]/body[1]/div[1]/div[1]/span[1]");
}

TEST(Render, PositionalXpathSurvivesUnemittedSiblings) {
  // The first div emits nothing, yet the second must still be div[2].
  const VprDocument d = GenerateVpr("u", "<div></div><div>x</div>");
  ASSERT_EQ(d.text_elements.size(), 1u);
  EXPECT_EQ(XpathString(d, d.text_elements[0].xpath_id), "/html[1]/body[1]/div[2]");
}

TEST(Render, EmptyPage) {
  const VprDocument d = GenerateVpr("u", "");
  EXPECT_EQ(d.height, 0);
  EXPECT_TRUE(d.text_elements.empty());
  EXPECT_EQ(d.xpath_tree.size(), 2u);
  EXPECT_TRUE(IsValid(d));
}

TEST(RenderFixtures, ThirtyFixturesWithGoldens) {
  const auto names = FixtureNames();
  EXPECT_EQ(names.size(), 30u);
  for (const std::string& n : names) {
    EXPECT_TRUE(fs::exists(kFixtures / "vpr" / (n + ".vpr.json"))) << n;
  }
}

TEST(RenderFixtures, MatchGoldensAndAreDeterministic) {
  for (const std::string& n : FixtureNames()) {
    const std::string first = SerializeVpr(RenderFixture(n));
    const std::string second = SerializeVpr(RenderFixture(n));
    EXPECT_EQ(first, second) << n;
    EXPECT_EQ(first, ReadFile((kFixtures / "vpr" / (n + ".vpr.json")).string())) << n;
  }
}

TEST(RenderFixtures, GoldensRoundTrip) {
  for (const std::string& n : FixtureNames()) {
    const std::string golden = ReadFile((kFixtures / "vpr" / (n + ".vpr.json")).string());
    const VprDocument d = ParseVpr(golden);
    EXPECT_TRUE(IsValid(d)) << n;
    EXPECT_EQ(SerializeVpr(d), golden) << n;
  }
}

TEST(RenderFixtures, EveryFieldIsExercised) {
  bool lazy = false, unknown = false, struck = false, href = false, no_href = false;
  bool image = false;
  for (const std::string& n : FixtureNames()) {
    const VprDocument d = RenderFixture(n);
    for (const auto& i : d.image_elements) {
      image = true;
      lazy |= i.lazy;
      unknown |= i.size_unknown;
    }
    for (const auto& t : d.text_elements) struck |= t.line_through;
    for (const auto& a : d.action_elements) {
      href |= a.href.has_value();
      no_href |= !a.href.has_value();
    }
  }
  EXPECT_TRUE(image && lazy && unknown && struck && href && no_href);
}

TEST(RenderFixtures, LineThroughSources) {
  const VprDocument tags = RenderFixture("03_strike_tags");
  for (const char* t : {"$129.99", "EUR 45,00", "Was 20.00", "whole struck", "nested bold"}) {
    const TextElement* e = FindText(tags, t);
    ASSERT_NE(e, nullptr) << t;
    EXPECT_TRUE(e->line_through) << t;
  }
  for (const char* t : {"$99.99", "EUR 39,00", "Now 15.00"}) {
    ASSERT_NE(FindText(tags, t), nullptr) << t;
    EXPECT_FALSE(FindText(tags, t)->line_through) << t;
  }
  const VprDocument css = RenderFixture("04_css_line_through");
  for (const char* t : {"Struck by a class rule", "Struck by an inline style",
                        "Longhand property"}) {
    ASSERT_NE(FindText(css, t), nullptr) << t;
    EXPECT_TRUE(FindText(css, t)->line_through) << t;
  }
  EXPECT_FALSE(FindText(css, "Hero text")->line_through);
  EXPECT_DOUBLE_EQ(FindText(css, "Hero text")->font_size, 28.0);
}

TEST(RenderFixtures, FontSizesFollowUnits) {
  const VprDocument d = RenderFixture("05_font_units");
  EXPECT_DOUBLE_EQ(FindText(d, "Twenty pixels")->font_size, 20.0);
  EXPECT_DOUBLE_EQ(FindText(d, "One and a half em")->font_size, 24.0);
  EXPECT_DOUBLE_EQ(FindText(d, "Em inside px")->font_size, 30.0);
  EXPECT_DOUBLE_EQ(FindText(d, "Two rem")->font_size, 32.0);
  EXPECT_DOUBLE_EQ(FindText(d, "Seventy five percent")->font_size, 12.0);
  EXPECT_DOUBLE_EQ(FindText(d, "Twelve points")->font_size, 16.0);
  EXPECT_DOUBLE_EQ(FindText(d, "Unparseable size keeps the parent size")->font_size, 16.0);
  // "Twenty pixels": 13 glyphs x 10px, line 24px.
  EXPECT_EQ(FindText(d, "Twenty pixels")->box, (BoundingBox{0, 0, 130, 24}));
}

TEST(RenderFixtures, HiddenContentIsAbsent) {
  const VprDocument d = RenderFixture("06_hidden");
  std::set<std::string> texts;
  for (const auto& t : d.text_elements) texts.insert(t.text);
  EXPECT_EQ(texts, (std::set<std::string>{"Visible before", "Visible after"}));
  EXPECT_TRUE(d.image_elements.empty());
}

TEST(RenderFixtures, RawTextNeverRenders) {
  const VprDocument d = RenderFixture("15_script_style_raw");
  for (const auto& t : d.text_elements) {
    EXPECT_EQ(t.text.find("not a div"), std::string::npos);
    EXPECT_EQ(t.text.find("JSON LD"), std::string::npos);
  }
  EXPECT_DOUBLE_EQ(FindText(d, "Styled by a late stylesheet")->font_size, 30.0);
}

TEST(RenderFixtures, BoxesStayInsideCanvas) {
  for (const std::string& n : FixtureNames()) {
    const VprDocument d = RenderFixture(n);
    int widest = d.width;
    for (const auto& t : d.text_elements) widest = std::max(widest, t.box.width);
    for (const auto& i : d.image_elements) widest = std::max(widest, i.box.width);
    auto check = [&](const BoundingBox& b) {
      EXPECT_LE(b.x + b.width, widest) << n;
      EXPECT_LE(b.y + b.height, d.height) << n;
      EXPECT_GE(b.x, 0) << n;
      EXPECT_GE(b.y, 0) << n;
    };
    for (const auto& t : d.text_elements) check(t.box);
    for (const auto& i : d.image_elements) check(i.box);
    for (const auto& a : d.action_elements) check(a.box);
  }
}

TEST(RenderFixtures, XpathTreeHasNoRedundantNodes) {
  // A node without an id must be html/body, an ancestor of an emitted node,
  // or a preceding same-tag sibling that fixes an emitted path's position.
  for (const std::string& n : FixtureNames()) {
    const VprDocument d = RenderFixture(n);
    const auto& tree = d.xpath_tree;
    std::vector<bool> needed(tree.size(), false);
    for (size_t i = 0; i < tree.size(); ++i) {
      if (!tree[i].xpath_id) continue;
      for (int p = static_cast<int>(i); p >= 0; p = tree[p].parent_id) needed[p] = true;
    }
    for (size_t i = 2; i < tree.size(); ++i) {
      if (needed[i]) continue;
      bool fixes_position = false;
      for (size_t j = i + 1; j < tree.size(); ++j) {
        fixes_position |= needed[j] && tree[j].parent_id == tree[i].parent_id &&
                          tree[j].tag_name == tree[i].tag_name;
      }
      EXPECT_TRUE(fixes_position) << n << " node " << i;
    }
    EXPECT_EQ(tree[0].tag_name, "html");
    EXPECT_EQ(tree[1].tag_name, "body");
  }
}

TEST(RenderFixtures, XpathStringsAreInjective) {
  for (const std::string& n : FixtureNames()) {
    const VprDocument d = RenderFixture(n);
    std::set<std::string> seen;
    for (const auto& node : d.xpath_tree) {
      if (node.xpath_id) {
        EXPECT_TRUE(seen.insert(XpathString(d, *node.xpath_id)).second) << n;
      }
    }
  }
}

TEST(RenderFixtures, SortingByXpathIdChangesNothing) {
  for (const std::string& n : FixtureNames()) {
    const VprDocument d = RenderFixture(n);
    VprDocument s = d;
    auto by_id = [](const auto& a, const auto& b) { return a.xpath_id < b.xpath_id; };
    std::sort(s.text_elements.begin(), s.text_elements.end(), by_id);
    std::sort(s.image_elements.begin(), s.image_elements.end(), by_id);
    std::sort(s.action_elements.begin(), s.action_elements.end(), by_id);
    EXPECT_EQ(s, d) << n;
  }
}

TEST(RenderFixtures, MeanSizeNearReference) {
  double bytes = 0;
  const auto names = FixtureNames();
  for (const std::string& n : names) bytes += SerializeVpr(RenderFixture(n)).size();
  const double mean_kb = bytes / names.size() / 1024.0;
  EXPECT_GE(mean_kb, 32.26 / 4);
  EXPECT_LE(mean_kb, 32.26 * 4);
}

}  // namespace
}  // namespace vprex
