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

#include "vprex/price.h"

#include <algorithm>
#include <cmath>

#include "embedded_config.h"
#include "vprex/error.h"
#include "vprex/text_util.h"

namespace vprex {
namespace {

bool IsDigit(char c) { return c >= '0' && c <= '9'; }
bool IsLetter(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

int64_t Pow10(int n) {
  int64_t v = 1;
  while (n-- > 0) v *= 10;
  return v;
}

bool BoundaryOk(std::string_view text, size_t pos, const std::string& token) {
  if (IsLetter(token.front()) && pos > 0 && IsLetter(text[pos - 1])) return false;
  const size_t after = pos + token.size();
  if (IsLetter(token.back()) && after < text.size() && IsLetter(text[after])) {
    return false;
  }
  return true;
}

// Width of a single skippable space at `pos`, going forward.
size_t SpaceAt(std::string_view text, size_t pos) {
  if (pos < text.size() && text[pos] == ' ') return 1;
  if (pos + 1 < text.size() && static_cast<unsigned char>(text[pos]) == 0xC2 &&
      static_cast<unsigned char>(text[pos + 1]) == 0xA0) {
    return 2;
  }
  return 0;
}

size_t SpaceBefore(std::string_view text, size_t pos) {
  if (pos >= 1 && text[pos - 1] == ' ') return 1;
  if (pos >= 2 && static_cast<unsigned char>(text[pos - 2]) == 0xC2 &&
      static_cast<unsigned char>(text[pos - 1]) == 0xA0) {
    return 2;
  }
  return 0;
}

}  // namespace

Decimal::Decimal(int64_t units, int scale) : units_(units), scale_(scale) {
  while (scale_ > 0 && units_ % 10 == 0) {
    units_ /= 10;
    --scale_;
  }
  if (units_ == 0) scale_ = 0;
}

std::optional<Decimal> Decimal::Parse(std::string_view s) {
  s = TrimAscii(s);
  if (s.empty()) return std::nullopt;
  bool negative = false;
  if (s.front() == '-') {
    negative = true;
    s.remove_prefix(1);
  }
  int64_t units = 0;
  int scale = 0;
  bool seen_dot = false;
  bool any_digit = false;
  for (char c : s) {
    if (c == '.') {
      if (seen_dot) return std::nullopt;
      seen_dot = true;
      continue;
    }
    if (!IsDigit(c)) return std::nullopt;
    if (units > (INT64_MAX - 9) / 10) return std::nullopt;
    units = units * 10 + (c - '0');
    if (seen_dot) ++scale;
    any_digit = true;
  }
  if (!any_digit || scale > 18) return std::nullopt;
  return Decimal(negative ? -units : units, scale);
}

double Decimal::ToDouble() const {
  return static_cast<double>(units_) / static_cast<double>(Pow10(scale_));
}

std::string Decimal::ToString() const {
  const bool negative = units_ < 0;
  const int64_t abs_units = negative ? -units_ : units_;
  const int64_t p = Pow10(scale_);
  std::string out = (negative ? "-" : "") + std::to_string(abs_units / p);
  if (scale_ > 0) {
    std::string frac = std::to_string(abs_units % p);
    out += "." + std::string(scale_ - frac.size(), '0') + frac;
  }
  return out;
}

const CurrencyTable& CurrencyTable::Default() {
  static const CurrencyTable table = Parse(internal::kEmbeddedCurrencies);
  return table;
}

CurrencyTable CurrencyTable::Parse(std::string_view tsv) {
  CurrencyTable table;
  for (const std::string& raw : SplitLines(tsv)) {
    std::string_view line = TrimAscii(raw);
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> cols;
    size_t start = 0;
    while (true) {
      size_t tab = line.find('\t', start);
      cols.emplace_back(TrimAscii(line.substr(start, tab - start)));
      if (tab == std::string_view::npos) break;
      start = tab + 1;
    }
    if (cols.size() != 3 || cols[0].empty() || cols[1].size() != 3) {
      throw Error(ErrorCode::kBadConfig, "bad currency line: " + std::string(line));
    }
    CurrencyEntry e{cols[0], cols[1], CurrencyEntry::Kind::kAmbiguous};
    if (cols[2] == "code") {
      e.kind = CurrencyEntry::Kind::kCode;
    } else if (cols[2] == "symbol") {
      e.kind = CurrencyEntry::Kind::kSymbol;
    } else if (cols[2] != "ambiguous") {
      throw Error(ErrorCode::kBadConfig, "bad currency kind: " + cols[2]);
    }
    table.entries_.push_back(std::move(e));
  }
  return table;
}

std::vector<CurrencyTable::Match> CurrencyTable::FindAll(std::string_view text) const {
  std::vector<Match> out;
  for (const CurrencyEntry& e : entries_) {
    size_t pos = text.find(e.token);
    while (pos != std::string_view::npos) {
      if (BoundaryOk(text, pos, e.token)) out.push_back({&e, pos});
      pos = text.find(e.token, pos + 1);
    }
  }
  return out;
}

const CurrencyEntry* CurrencyTable::TokenEndingAt(std::string_view text,
                                                  size_t end) const {
  const CurrencyEntry* best = nullptr;
  for (const CurrencyEntry& e : entries_) {
    if (e.token.size() > end) continue;
    const size_t pos = end - e.token.size();
    if (text.substr(pos, e.token.size()) != e.token) continue;
    if (!BoundaryOk(text, pos, e.token)) continue;
    if (best == nullptr || e.token.size() > best->token.size()) best = &e;
  }
  return best;
}

const CurrencyEntry* CurrencyTable::TokenStartingAt(std::string_view text,
                                                    size_t begin) const {
  const CurrencyEntry* best = nullptr;
  for (const CurrencyEntry& e : entries_) {
    if (text.substr(begin, e.token.size()) != e.token) continue;
    if (!BoundaryOk(text, begin, e.token)) continue;
    if (best == nullptr || e.token.size() > best->token.size()) best = &e;
  }
  return best;
}

std::optional<Decimal> ParsePriceNumber(std::string_view number) {
  std::vector<std::string_view> groups;
  std::vector<char> seps;
  size_t start = 0;
  for (size_t i = 0; i <= number.size(); ++i) {
    if (i == number.size() || number[i] == '.' || number[i] == ',') {
      if (i == start) return std::nullopt;
      groups.push_back(number.substr(start, i - start));
      if (i < number.size()) seps.push_back(number[i]);
      start = i + 1;
    } else if (!IsDigit(number[i])) {
      return std::nullopt;
    }
  }
  std::string integer;
  std::string fraction;
  size_t int_groups = groups.size();
  if (!seps.empty() && groups.back().size() == 2) {
    fraction = std::string(groups.back());
    int_groups = groups.size() - 1;
    // The thousands separator must differ from the decimal point.
    for (size_t i = 0; i + 1 < int_groups; ++i) {
      if (seps[i] == seps.back()) return std::nullopt;
    }
  }
  for (size_t i = 0; i < int_groups; ++i) {
    if (i > 0) {
      if (groups[i].size() != 3 || seps[i - 1] != seps[0]) return std::nullopt;
    } else if (int_groups > 1 && groups[0].size() > 3) {
      return std::nullopt;
    }
    integer += groups[i];
  }
  if (integer.size() > 15) return std::nullopt;
  return Decimal::Parse(fraction.empty() ? integer : integer + "." + fraction);
}

std::optional<PriceMatch> FindPrice(std::string_view text, const CurrencyTable& table) {
  size_t i = 0;
  while (i < text.size()) {
    if (!IsDigit(text[i]) || (i > 0 && IsDigit(text[i - 1]))) {
      ++i;
      continue;
    }
    size_t end = i;
    while (end < text.size()) {
      if (IsDigit(text[end])) {
        ++end;
      } else if ((text[end] == '.' || text[end] == ',') && end + 1 < text.size() &&
                 IsDigit(text[end + 1])) {
        ++end;
      } else {
        break;
      }
    }
    const size_t begin = i;
    i = end;
    const CurrencyEntry* token = table.TokenEndingAt(text, begin);
    if (token == nullptr) {
      const size_t sp = SpaceBefore(text, begin);
      if (sp > 0) token = table.TokenEndingAt(text, begin - sp);
    }
    if (token == nullptr) {
      token = table.TokenStartingAt(text, end);
      if (token == nullptr) {
        const size_t sp = SpaceAt(text, end);
        if (sp > 0) token = table.TokenStartingAt(text, end + sp);
      }
    }
    if (token == nullptr) continue;
    auto value = ParsePriceNumber(text.substr(begin, end - begin));
    if (!value || !value->IsPositive()) continue;
    return PriceMatch{*value, token->token, begin, end};
  }
  return std::nullopt;
}

std::optional<std::string> ResolveCurrency(const std::optional<std::string>& sale_text,
                                           const std::optional<std::string>& list_text,
                                           const CurrencyTable& table) {
  struct Ranked {
    int kind;
    int text_index;
    size_t pos;
    const CurrencyEntry* entry;
  };
  std::vector<Ranked> found;
  const std::optional<std::string>* texts[] = {&sale_text, &list_text};
  for (int t = 0; t < 2; ++t) {
    if (!texts[t]->has_value()) continue;
    for (const auto& m : table.FindAll(**texts[t])) {
      found.push_back({static_cast<int>(m.entry->kind), t, m.pos, m.entry});
    }
  }
  if (found.empty()) return std::nullopt;
  const Ranked& best = *std::min_element(
      found.begin(), found.end(), [](const Ranked& a, const Ranked& b) {
        if (a.kind != b.kind) return a.kind < b.kind;
        if (a.text_index != b.text_index) return a.text_index < b.text_index;
        if (a.pos != b.pos) return a.pos < b.pos;
        return a.entry->token.size() > b.entry->token.size();
      });
  return best.entry->iso;
}

}  // namespace vprex
