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

#include <gtest/gtest.h>

#include <random>

#include "vprex/error.h"
#include "vprex/price.h"
#include "vprex/text_util.h"
#include "vprex/threshold.h"
#include "vprex/url.h"

namespace vprex {
namespace {

TEST(Decimal, ParseAndCanonicalForm) {
  EXPECT_EQ(Decimal::Parse("19.90")->ToString(), "19.9");
  EXPECT_EQ(Decimal::Parse("20.00")->ToString(), "20");
  EXPECT_EQ(Decimal::Parse("1234.56")->ToString(), "1234.56");
  EXPECT_EQ(*Decimal::Parse("19.9"), *Decimal::Parse("19.90"));
  EXPECT_FALSE(Decimal::Parse("abc").has_value());
  EXPECT_FALSE(Decimal::Parse("").has_value());
  EXPECT_DOUBLE_EQ(Decimal::Parse("0.25")->ToDouble(), 0.25);
}

TEST(FindPrice, DollarAmount) {
  const auto m = FindPrice("$19.99");
  ASSERT_TRUE(m.has_value());
  EXPECT_DOUBLE_EQ(m->value.ToDouble(), 19.99);
  EXPECT_EQ(m->currency_hint, "$");
}

TEST(FindPrice, NeedsCurrencyNextToNumber) {
  EXPECT_FALSE(FindPrice("Free shipping over 50 items").has_value());
  EXPECT_FALSE(FindPrice("Model 2024").has_value());
}

TEST(FindPrice, CommaDecimalSeparator) {
  const auto m = FindPrice("€1.234,56");
  ASSERT_TRUE(m.has_value());
  EXPECT_DOUBLE_EQ(m->value.ToDouble(), 1234.56);
  EXPECT_EQ(m->currency_hint, "€");
}

TEST(FindPrice, ThousandsAndTrailingCode) {
  const auto a = FindPrice("$1,299.00");
  ASSERT_TRUE(a.has_value());
  EXPECT_EQ(a->value.ToString(), "1299");
  const auto b = FindPrice("20 EUR");
  ASSERT_TRUE(b.has_value());
  EXPECT_EQ(b->value.ToString(), "20");
  EXPECT_EQ(b->currency_hint, "EUR");
}

TEST(FindPrice, AlphabeticCodesNeedWordBoundaries) {
  // "USD" inside a longer word is not a currency.
  EXPECT_FALSE(FindPrice("FUSDA 20").has_value());
}

TEST(ResolveCurrency, Priority) {
  EXPECT_EQ(ResolveCurrency(std::string("€49.00"), std::nullopt), "EUR");
  EXPECT_EQ(ResolveCurrency(std::string("CA$ 20"), std::nullopt), "CAD");
  EXPECT_EQ(ResolveCurrency(std::string("$25.00"), std::nullopt), "USD");
  EXPECT_EQ(ResolveCurrency(std::nullopt, std::nullopt), std::nullopt);
  // The list price text can supply a stronger token than the sale text.
  EXPECT_EQ(ResolveCurrency(std::string("$20"), std::string("CA$25")), "CAD");
}

TEST(CurrencyTable, ParseTsv) {
  const CurrencyTable t = CurrencyTable::Parse("# c\nXX\tXXX\tcode\n@\tAAA\tsymbol\n");
  ASSERT_EQ(t.entries().size(), 2u);
  EXPECT_EQ(t.entries()[1].iso, "AAA");
  EXPECT_EQ(t.entries()[1].kind, CurrencyEntry::Kind::kSymbol);
  EXPECT_TRUE(FindPrice("@5", t).has_value());
  EXPECT_FALSE(FindPrice("$5", t).has_value());
}

TEST(Threshold, EvaluateCounts) {
  const std::vector<double> s{0.9, 0.8, 0.3};
  const std::vector<int> l{1, 0, 1};
  const ThresholdPoint p = EvaluateThreshold(s, l, 0.5);
  EXPECT_EQ(p.tp, 1u);
  EXPECT_EQ(p.fp, 1u);
  EXPECT_EQ(p.fn, 1u);
  EXPECT_DOUBLE_EQ(p.precision, 0.5);
  EXPECT_DOUBLE_EQ(p.recall, 0.5);
  EXPECT_DOUBLE_EQ(EvaluateThreshold(s, l, 2.0).precision, 1.0);
}

TEST(Threshold, SeparatedScoresGiveSmallestQualifyingScore) {
  const std::vector<double> s{0.1, 0.2, 0.3, 0.7, 0.8, 0.9};
  const std::vector<int> l{0, 0, 0, 1, 1, 1};
  EXPECT_DOUBLE_EQ(TunePrecisionThreshold(s, l, 0.95), 0.7);
  EXPECT_DOUBLE_EQ(TunePrecisionThreshold(s, l, 1.0), 0.7);
}

TEST(Threshold, UnreachableTargetFallsBackToBestPrecision) {
  // One negative outscores every positive, so precision 1.0 is impossible.
  // Cut-offs: 0.95 -> 0/1, 0.9 -> 1/2, 0.85 -> 2/3, 0.8 -> 3/4, 0.2 -> 3/5,
  // 0.1 -> 3/6. Best is 0.75 at 0.8.
  const std::vector<double> s{0.95, 0.9, 0.85, 0.8, 0.2, 0.1};
  const std::vector<int> l{0, 1, 1, 1, 0, 0};
  EXPECT_DOUBLE_EQ(TunePrecisionThreshold(s, l, 1.0), 0.8);
}

TEST(Threshold, MinRecallConstrainsChoice) {
  const std::vector<double> s{0.9, 0.8, 0.6, 0.5, 0.4};
  const std::vector<int> l{1, 0, 1, 0, 1};
  // Precision 1 only at 0.9 (recall 1/3); with recall >= 0.9 the only
  // feasible cut-offs are 0.4 and below.
  EXPECT_DOUBLE_EQ(TunePrecisionThreshold(s, l, 1.0), 0.9);
  EXPECT_DOUBLE_EQ(TunePrecisionThreshold(s, l, 1.0, 0.9), 0.4);
}

TEST(Threshold, RecallNonIncreasingInTarget) {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> pos(0.7, 0.15), neg(0.35, 0.15);
  std::vector<double> s;
  std::vector<int> l;
  for (int i = 0; i < 2000; ++i) {
    const bool y = i % 3 == 0;
    s.push_back(y ? pos(rng) : neg(rng));
    l.push_back(y);
  }
  double prev = 1.1;
  for (double target = 0.90; target <= 0.99 + 1e-9; target += 0.01) {
    const double t = TunePrecisionThreshold(s, l, target);
    const double recall = EvaluateThreshold(s, l, t).recall;
    EXPECT_LE(recall, prev) << target;
    prev = recall;
  }
}

TEST(Threshold, Errors) {
  try {
    TunePrecisionThreshold({}, {}, 0.9);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyValidation);
  }
}

TEST(Url, Resolve) {
  EXPECT_EQ(ResolveUrl("https://a.com/x/y.html", "i.jpg"), "https://a.com/x/i.jpg");
  EXPECT_EQ(ResolveUrl("https://a.com/x/y.html", "/i.jpg"), "https://a.com/i.jpg");
  EXPECT_EQ(ResolveUrl("https://a.com/x/y.html", "../i.jpg"), "https://a.com/i.jpg");
  EXPECT_EQ(ResolveUrl("https://a.com/x/y.html", "//cdn.b.com/i.jpg"), "https://cdn.b.com/i.jpg");
  EXPECT_EQ(ResolveUrl("https://a.com/x/y.html", "http://c.org/z"), "http://c.org/z");
  EXPECT_EQ(ResolveUrl("https://a.com/x/y.html?q=1", "?p=2"), "https://a.com/x/y.html?p=2");
}

TEST(Url, SplitJoinRoundTrip) {
  for (const char* u : {"https://a.com/p?q=1#f", "http://x.y:8080/", "mailto:a@b.c"}) {
    EXPECT_EQ(JoinUrl(SplitUrl(u)), u);
  }
}

TEST(Url, HostAndRegistrableDomain) {
  EXPECT_EQ(UrlHost("https://Shop.Example.com:443/a"), "shop.example.com");
  EXPECT_EQ(RegistrableDomain("https://shop.example.com/a"), "example.com");
  EXPECT_EQ(RegistrableDomain("www.shop.example.co.uk"), "example.co.uk");
  EXPECT_EQ(RegistrableDomain("localhost"), "localhost");
  EXPECT_EQ(RegistrableDomain("10.0.0.1"), "10.0.0.1");
}

TEST(TextUtil, Basics) {
  EXPECT_EQ(Utf8Length("é€x"), 3u);
  std::string s;
  AppendUtf8(s, U'€');
  EXPECT_EQ(s, "€");
  EXPECT_EQ(AsciiLower("AbC"), "abc");
  EXPECT_EQ(TrimAscii("  a b \n"), "a b");
  EXPECT_EQ(NormalizeText("  Blue   Shirt \n"), "blue shirt");
  EXPECT_EQ(Tokenize("Add to-Cart!"), (std::vector<std::string>{"add", "to", "cart"}));
  EXPECT_EQ(SplitLines("a\nb\r\n\nc"), (std::vector<std::string>{"a", "b", "", "c"}));
  // Published FNV-1a test vectors.
  EXPECT_EQ(Fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(Fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
}

}  // namespace
}  // namespace vprex
