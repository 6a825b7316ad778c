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

#ifndef VPREX_PRICE_H_
#define VPREX_PRICE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vprex {

// Exact decimal: value = units / 10^scale, kept normalized (no trailing
// zeros in the fraction) so that equality is numeric equality.
class Decimal {
 public:
  Decimal() = default;
  Decimal(int64_t units, int scale);

  // Accepts plain "1234.5" style strings; nullopt otherwise.
  static std::optional<Decimal> Parse(std::string_view s);

  int64_t units() const { return units_; }
  int scale() const { return scale_; }
  double ToDouble() const;
  // Canonical form: "19.9", "20", "1234.56".
  std::string ToString() const;
  bool IsPositive() const { return units_ > 0; }

  friend bool operator==(const Decimal&, const Decimal&) = default;

 private:
  int64_t units_ = 0;
  int scale_ = 0;
};

struct CurrencyEntry {
  enum class Kind { kCode = 0, kSymbol = 1, kAmbiguous = 2 };
  std::string token;
  std::string iso;
  Kind kind = Kind::kAmbiguous;
};

class CurrencyTable {
 public:
  // Built-in table (config/currencies.tsv at build time).
  static const CurrencyTable& Default();
  // Tab-separated "token iso kind" lines; '#' starts a comment.
  static CurrencyTable Parse(std::string_view tsv);

  const std::vector<CurrencyEntry>& entries() const { return entries_; }

  struct Match {
    const CurrencyEntry* entry = nullptr;
    size_t pos = 0;
  };
  // Every occurrence of a table token in `text`. Alphabetic tokens must sit
  // on word boundaries.
  std::vector<Match> FindAll(std::string_view text) const;
  // Longest token ending exactly at `end` / starting exactly at `begin`.
  const CurrencyEntry* TokenEndingAt(std::string_view text, size_t end) const;
  const CurrencyEntry* TokenStartingAt(std::string_view text, size_t begin) const;

 private:
  std::vector<CurrencyEntry> entries_;
};

struct PriceMatch {
  Decimal value;
  std::string currency_hint;  // the matched table token, e.g. "$", "CA$"
  size_t begin = 0;           // byte span of the number
  size_t end = 0;
};

// Price grammar: a table token adjacent (at most one space, NBSP included)
// to a number with optional thousands separators. "1,234.56" and
// "1.234,56" are both accepted: the last separator is the decimal point iff
// exactly two digits follow it. Returns the first positive match.
std::optional<PriceMatch> FindPrice(std::string_view text,
                                    const CurrencyTable& table = CurrencyTable::Default());

// Parses a bare number with the same separator rules (no currency needed).
std::optional<Decimal> ParsePriceNumber(std::string_view number);

// ISO code for a pair of price texts: explicit codes beat unambiguous symbols,
// which beat ambiguous ones ($ -> USD, kr -> SEK, ¥ -> JPY); within a level
// the sale text wins, then the earliest and longest token.
std::optional<std::string> ResolveCurrency(
    const std::optional<std::string>& sale_text,
    const std::optional<std::string>& list_text,
    const CurrencyTable& table = CurrencyTable::Default());

}  // namespace vprex

#endif  // VPREX_PRICE_H_
