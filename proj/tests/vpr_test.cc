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

#include "vprex/vpr.h"

#include <gtest/gtest.h>

#include "json.hpp"
#include "vprex/error.h"

namespace vprex {
namespace {

// One element of each kind, written out by hand in schema order.
constexpr char kOneOfEach[] =
    R"({"url":"https://a.test/p","title":"T","width":1280,"height":120,)"
    R"("imageElements":[{"x":0,"y":0,"width":100,"height":50,"xpathId":0,"src":"i.jpg"}],)"
    R"("textElements":[{"x":0,"y":50,"width":40,"height":19,"xpathId":1,"fontSize":16.0,)"
    R"("lineThrough":true,"text":"hello"}],)"
    R"("actionElements":[{"x":0,"y":69,"width":32,"height":19,"xpathId":2,"href":"/x"}],)"
    R"("xpathTree":[{"tagName":"html","parentId":-1},{"tagName":"body","parentId":0},)"
    R"({"tagName":"img","parentId":1,"xpathId":0},{"tagName":"s","parentId":1,"xpathId":1},)"
    R"({"tagName":"a","parentId":1,"xpathId":2}],"version":"1"})";

VprDocument Skeleton() {
  VprDocument d;
  d.url = "https://a.test/";
  d.width = 1280;
  d.xpath_tree = {{"html", kRootParentId, std::nullopt}, {"body", 0, std::nullopt}};
  return d;
}

TEST(VprParse, MinimalDocumentHasNoElements) {
  const VprDocument d = ParseVpr(
      R"({"url":"u","title":"","width":1280,"height":0,"imageElements":[],)"
      R"("textElements":[],"actionElements":[],"xpathTree":[],"version":"1"})");
  EXPECT_TRUE(d.text_elements.empty());
  EXPECT_TRUE(d.image_elements.empty());
  EXPECT_TRUE(d.action_elements.empty());
  EXPECT_EQ(d.width, 1280);
}

TEST(VprParse, DanglingXpathIdIsSchemaViolation) {
  const std::string doc =
      R"({"url":"u","title":"","width":1280,"height":0,"imageElements":[],)"
      R"("textElements":[{"x":0,"y":0,"width":8,"height":19,"xpathId":7,"fontSize":16,)"
      R"("lineThrough":false,"text":"a"}],"actionElements":[],)"
      R"("xpathTree":[{"tagName":"html","parentId":-1}],"version":"1"})";
  try {
    ParseVpr(doc);
    FAIL() << "expected SchemaViolation";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSchemaViolation);
  }
}

TEST(VprParse, MalformedJson) {
  try {
    ParseVpr("{\"url\":");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMalformedJson);
  }
}

TEST(VprParse, MissingFieldIsSchemaViolation) {
  try {
    ParseVpr(R"({"url":"u","width":1280})");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSchemaViolation);
  }
}

TEST(VprParse, UnknownFieldsAreReported) {
  std::vector<std::string> warnings;
  nlohmann::json j = nlohmann::json::parse(kOneOfEach);
  j["screenshot"] = "none";
  j["textElements"][0]["color"] = "red";
  const VprDocument d = ParseVpr(j.dump(), &warnings);
  EXPECT_EQ(d.text_elements.size(), 1u);
  EXPECT_EQ(warnings.size(), 2u);
}

TEST(VprSerialize, OneOfEachRoundTripsByteForByte) {
  const VprDocument d = ParseVpr(kOneOfEach);
  EXPECT_EQ(SerializeVpr(d), kOneOfEach);
  EXPECT_EQ(ParseVpr(SerializeVpr(d)), d);
  // An independent reader sees the same values.
  const nlohmann::json j = nlohmann::json::parse(SerializeVpr(d));
  EXPECT_EQ(j["textElements"][0]["text"], "hello");
  EXPECT_EQ(j["actionElements"][0]["href"], "/x");
  EXPECT_EQ(j["xpathTree"].size(), 5u);
}

TEST(VprSerialize, EmptyDocumentKeepsAllArrays) {
  const std::string s = SerializeVpr(Skeleton());
  EXPECT_NE(s.find(R"("imageElements":[])"), std::string::npos);
  EXPECT_NE(s.find(R"("textElements":[])"), std::string::npos);
  EXPECT_NE(s.find(R"("actionElements":[])"), std::string::npos);
  EXPECT_NE(s.find(R"("xpathTree":[)"), std::string::npos);
}

TEST(VprSerialize, KeyOrderFollowsSchema) {
  const std::string s = SerializeVpr(ParseVpr(kOneOfEach));
  const char* keys[] = {"\"url\"",          "\"title\"",          "\"width\"",
                        "\"height\"",       "\"imageElements\"",  "\"textElements\"",
                        "\"actionElements\"", "\"xpathTree\"",    "\"version\""};
  size_t last = 0;
  for (const char* k : keys) {
    const size_t pos = s.find(k);
    ASSERT_NE(pos, std::string::npos) << k;
    EXPECT_GE(pos, last) << k;
    last = pos;
  }
}

TEST(VprSerialize, IntegersHaveNoDecimalPointAndFontSizeOneDecimal) {
  VprDocument d = Skeleton();
  d.xpath_tree.push_back({"p", 1, 0});
  d.text_elements.push_back({{3, 4, 5, 6}, 0, 13.333333, false, "x"});
  const std::string s = SerializeVpr(d);
  EXPECT_NE(s.find(R"("x":3,"y":4,"width":5,"height":6)"), std::string::npos) << s;
  EXPECT_NE(s.find(R"("fontSize":13.3)"), std::string::npos) << s;
}

TEST(VprSerialize, Idempotent) {
  const std::string once = SerializeVpr(ParseVpr(kOneOfEach));
  EXPECT_EQ(SerializeVpr(ParseVpr(once)), once);
}

TEST(VprValidate, ValidDocumentHasNoViolations) {
  EXPECT_TRUE(Validate(ParseVpr(kOneOfEach)).empty());
}

TEST(VprValidate, ZeroFontSize) {
  VprDocument d = ParseVpr(kOneOfEach);
  d.text_elements[0].font_size = 0;
  const auto v = Validate(d);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].field, "textElements[0].fontSize");
  EXPECT_EQ(v[0].rule, "positive");
  EXPECT_FALSE(IsValid(d));
}

TEST(VprValidate, ChildBeforeParent) {
  VprDocument d = Skeleton();
  d.xpath_tree.push_back({"div", 3, std::nullopt});
  d.xpath_tree.push_back({"p", 1, std::nullopt});
  const auto v = Validate(d);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].field, "xpathTree[2].parentId");
  EXPECT_EQ(v[0].rule, "parent precedes child");
}

TEST(VprValidate, NegativeCoordinatesAreWarningsOnly) {
  VprDocument d = ParseVpr(kOneOfEach);
  d.text_elements[0].box.x = -5;
  const auto v = Validate(d);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].severity, Violation::Severity::kWarning);
  EXPECT_TRUE(IsValid(d));
}

TEST(VprValidate, DuplicateXpathIdAndOrder) {
  VprDocument d = ParseVpr(kOneOfEach);
  d.xpath_tree[4].xpath_id = 1;
  EXPECT_FALSE(IsValid(d));
  d = ParseVpr(kOneOfEach);
  d.image_elements.push_back(d.image_elements[0]);
  EXPECT_FALSE(IsValid(d));
}

TEST(VprValidate, EmptyTextAndSrcAndHref) {
  VprDocument d = ParseVpr(kOneOfEach);
  d.text_elements[0].text = "  ";
  d.image_elements[0].src = "";
  d.action_elements[0].href = "";
  EXPECT_EQ(Validate(d).size(), 3u);
}

TEST(VprXpath, RootIsHtml1) {
  const VprDocument d = ParseVpr(kOneOfEach);
  EXPECT_EQ(XpathStringForNode(d, 0), "/html[1]");
}

TEST(VprXpath, SecondDivOfBody) {
  VprDocument d = Skeleton();
  d.xpath_tree.push_back({"div", 1, std::nullopt});
  d.xpath_tree.push_back({"div", 1, 4});
  EXPECT_EQ(XpathString(d, 4), "/html[1]/body[1]/div[2]");
}

TEST(VprXpath, SiblingSpansCountPerTag) {
  VprDocument d = Skeleton();
  d.xpath_tree.push_back({"p", 1, std::nullopt});
  d.xpath_tree.push_back({"span", 2, 0});
  d.xpath_tree.push_back({"b", 2, 1});
  d.xpath_tree.push_back({"span", 2, 2});
  EXPECT_EQ(XpathString(d, 0), "/html[1]/body[1]/p[1]/span[1]");
  EXPECT_EQ(XpathString(d, 1), "/html[1]/body[1]/p[1]/b[1]");
  EXPECT_EQ(XpathString(d, 2), "/html[1]/body[1]/p[1]/span[2]");
  EXPECT_EQ(FindXpathId(d, "/html[1]/body[1]/p[1]/span[2]"), 2);
  EXPECT_EQ(FindXpathId(d, "/html[1]/body[1]/p[1]/span[3]"), std::nullopt);
}

TEST(VprXpath, UnknownIdThrows) {
  try {
    XpathString(Skeleton(), 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownXpathId);
  }
}

TEST(VprXpath, AllXpathStringsMatchesPerNode) {
  const VprDocument d = ParseVpr(kOneOfEach);
  const auto all = AllXpathStrings(d);
  ASSERT_EQ(all.size(), d.xpath_tree.size());
  for (size_t i = 0; i < all.size(); ++i) {
    EXPECT_EQ(all[i], XpathStringForNode(d, static_cast<int>(i)));
  }
}

}  // namespace
}  // namespace vprex
