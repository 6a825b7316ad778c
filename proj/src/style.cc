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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <unordered_set>

#include "vprex/text_util.h"

namespace vprex {
namespace {

const std::unordered_set<std::string_view>& BlockTags() {
  static const std::unordered_set<std::string_view> tags = {
      "div",     "p",      "h1",     "h2",   "h3",   "h4",    "h5",
      "h6",      "ul",     "ol",     "li",   "section", "article", "header",
      "footer",  "main",   "table",  "tr",   "html", "body",  "nav",
      "aside",   "form",   "dl",     "dt",   "dd",   "blockquote", "pre",
      "figure",  "figcaption", "hr", "address", "fieldset", "details",
      "menu",    "tbody",  "thead",  "tfoot"};
  return tags;
}

const std::unordered_set<std::string_view>& HiddenTags() {
  static const std::unordered_set<std::string_view> tags = {
      "head", "script", "style", "title", "meta", "link", "noscript",
      "template", "base", "datalist", "param", "source", "track"};
  return tags;
}

std::optional<double> HeadingSize(std::string_view tag) {
  static constexpr double kSizes[] = {32, 24, 19, 16, 13, 11};
  if (tag.size() == 2 && tag[0] == 'h' && tag[1] >= '1' && tag[1] <= '6') {
    return kSizes[tag[1] - '1'];
  }
  return std::nullopt;
}

std::string StripComments(std::string_view css) {
  std::string out;
  size_t i = 0;
  while (i < css.size()) {
    if (css.substr(i, 2) == "/*") {
      size_t end = css.find("*/", i + 2);
      i = end == std::string_view::npos ? css.size() : end + 2;
    } else {
      out.push_back(css[i++]);
    }
  }
  return out;
}

bool IsIdentChar(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c == '-' || c == '_';
}

// Parses "tag.class#id" style compound selectors; false for anything else.
bool ParseSelector(std::string_view sel, CssRule& rule) {
  sel = TrimAscii(sel);
  if (sel.empty()) return false;
  size_t i = 0;
  if (sel[0] == '*') {
    i = 1;
  } else {
    while (i < sel.size() && IsIdentChar(sel[i])) ++i;
    rule.tag = AsciiLower(sel.substr(0, i));
  }
  while (i < sel.size()) {
    char kind = sel[i];
    if (kind != '.' && kind != '#') return false;
    size_t start = ++i;
    while (i < sel.size() && IsIdentChar(sel[i])) ++i;
    if (i == start) return false;
    std::string name(sel.substr(start, i - start));
    if (kind == '.') {
      rule.classes.push_back(std::move(name));
    } else {
      if (!rule.id.empty()) return false;
      rule.id = std::move(name);
    }
  }
  return true;
}

std::optional<double> ParseNumberWithUnit(std::string_view v,
                                          std::string_view* unit) {
  v = TrimAscii(v);
  size_t i = 0;
  while (i < v.size() && ((v[i] >= '0' && v[i] <= '9') || v[i] == '.' ||
                          (i == 0 && (v[i] == '-' || v[i] == '+')))) {
    ++i;
  }
  if (i == 0) return std::nullopt;
  double number = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + i, number);
  if (ec != std::errc() || ptr != v.data() + i) return std::nullopt;
  *unit = v.substr(i);
  return number;
}

std::optional<double> ParsePixels(std::string_view value) {
  std::string_view unit;
  auto n = ParseNumberWithUnit(value, &unit);
  if (!n || *n < 0) return std::nullopt;
  unit = TrimAscii(unit);
  if (unit == "px" || unit.empty()) return *n;
  return std::nullopt;
}

struct Matched {
  bool important;
  bool is_inline;
  int specificity;
  int order;
  const CssDeclaration* decl;
};

class StyleResolver {
 public:
  explicit StyleResolver(const DomNode& dom) {
    int order = 0;
    ForEachElement(dom, [&](const DomNode& el) {
      if (el.tag != "style") return;
      auto rules = ParseStylesheet(el.text, order);
      order += static_cast<int>(rules.size());
      for (auto& r : rules) rules_.push_back(std::move(r));
    });
  }

  StyledNode Resolve(const DomNode& node, const ComputedStyle& parent) const {
    StyledNode out;
    out.node = &node;
    if (node.is_text()) {
      out.style = parent;
      out.style.display = ComputedStyle::Display::kInline;
      out.style.width_px.reset();
      out.style.height_px.reset();
      return out;
    }
    out.style = Cascade(node, parent);
    out.children.reserve(node.children.size());
    for (const auto& child : node.children) {
      out.children.push_back(Resolve(*child, out.style));
    }
    return out;
  }

 private:
  ComputedStyle Cascade(const DomNode& el, const ComputedStyle& parent) const {
    ComputedStyle s;
    s.visibility = parent.visibility;
    s.font_size_px = parent.font_size_px;
    s.line_through = parent.line_through;

    if (HiddenTags().contains(el.tag) || el.HasAttr("hidden")) {
      s.display = ComputedStyle::Display::kNone;
    } else if (BlockTags().contains(el.tag)) {
      s.display = ComputedStyle::Display::kBlock;
    }
    if (el.tag == "input") {
      const std::string* type = el.Attr("type");
      if (type != nullptr && AsciiLower(*type) == "hidden") {
        s.display = ComputedStyle::Display::kNone;
      }
    }
    if (auto h = HeadingSize(el.tag)) s.font_size_px = *h;
    if (el.tag == "s" || el.tag == "strike" || el.tag == "del") {
      s.line_through = true;
    }
    if (el.tag == "img") {
      if (const std::string* w = el.Attr("width")) s.width_px = ParsePixels(*w);
      if (const std::string* h = el.Attr("height")) s.height_px = ParsePixels(*h);
    }

    std::vector<Matched> matched;
    for (const CssRule& rule : rules_) {
      if (!SelectorMatches(rule, el)) continue;
      for (const CssDeclaration& d : rule.declarations) {
        matched.push_back({d.important, false, rule.Specificity(), rule.order, &d});
      }
    }
    std::vector<CssDeclaration> inline_decls;
    if (const std::string* style = el.Attr("style")) {
      inline_decls = ParseDeclarations(*style);
      for (const CssDeclaration& d : inline_decls) {
        matched.push_back({d.important, true, 0, 0, &d});
      }
    }
    std::stable_sort(matched.begin(), matched.end(),
                     [](const Matched& a, const Matched& b) {
                       if (a.important != b.important) return !a.important;
                       if (a.is_inline != b.is_inline) return !a.is_inline;
                       if (a.specificity != b.specificity) {
                         return a.specificity < b.specificity;
                       }
                       return a.order < b.order;
                     });

    const bool attr_width = s.width_px.has_value();
    const bool attr_height = s.height_px.has_value();
    for (const Matched& m : matched) {
      Apply(*m.decl, parent, attr_width, attr_height, s);
    }
    return s;
  }

  static void Apply(const CssDeclaration& d, const ComputedStyle& parent,
                    bool attr_width, bool attr_height, ComputedStyle& s) {
    const std::string value = AsciiLower(TrimAscii(d.value));
    if (d.property == "display") {
      if (value == "none") {
        s.display = ComputedStyle::Display::kNone;
      } else if (value == "inline" || value == "inline-block" ||
                 value == "inline-flex" || value == "contents") {
        s.display = ComputedStyle::Display::kInline;
      } else if (value == "block" || value == "flex" || value == "grid" ||
                 value == "list-item" || value.rfind("table", 0) == 0) {
        s.display = ComputedStyle::Display::kBlock;
      }
    } else if (d.property == "visibility") {
      if (value == "hidden" || value == "collapse") {
        s.visibility = ComputedStyle::Visibility::kHidden;
      } else if (value == "visible") {
        s.visibility = parent.visibility;
      }
    } else if (d.property == "font-size") {
      if (auto px = ParseFontSize(value, parent.font_size_px)) s.font_size_px = *px;
    } else if (d.property == "text-decoration" ||
               d.property == "text-decoration-line") {
      if (value.find("line-through") != std::string::npos) {
        s.line_through = true;
      } else if (value == "none") {
        s.line_through = parent.line_through;
      }
    } else if (d.property == "width" && !attr_width) {
      if (auto px = ParsePixels(value)) s.width_px = px;
    } else if (d.property == "height" && !attr_height) {
      if (auto px = ParsePixels(value)) s.height_px = px;
    }
  }

  std::vector<CssRule> rules_;
};

}  // namespace

std::vector<CssDeclaration> ParseDeclarations(std::string_view block) {
  std::vector<CssDeclaration> out;
  size_t start = 0;
  while (start <= block.size()) {
    size_t end = block.find(';', start);
    if (end == std::string_view::npos) end = block.size();
    std::string_view decl = block.substr(start, end - start);
    size_t colon = decl.find(':');
    if (colon != std::string_view::npos) {
      std::string prop = AsciiLower(TrimAscii(decl.substr(0, colon)));
      std::string_view value = TrimAscii(decl.substr(colon + 1));
      bool important = false;
      size_t bang = value.find('!');
      if (bang != std::string_view::npos) {
        important = AsciiLower(TrimAscii(value.substr(bang + 1))) == "important";
        value = TrimAscii(value.substr(0, bang));
      }
      if (!prop.empty() && !value.empty()) {
        out.push_back({std::move(prop), std::string(value), important});
      }
    }
    if (end == block.size()) break;
    start = end + 1;
  }
  return out;
}

std::vector<CssRule> ParseStylesheet(std::string_view css_in, int first_order) {
  const std::string css = StripComments(css_in);
  std::vector<CssRule> rules;
  int order = first_order;
  size_t i = 0;
  while (i < css.size()) {
    size_t brace = css.find('{', i);
    if (brace == std::string::npos) break;
    std::string_view prelude = TrimAscii(std::string_view(css).substr(i, brace - i));
    // Skip a complete at-rule block, including nested braces.
    if (!prelude.empty() && prelude.find('@') != std::string_view::npos) {
      size_t semi = prelude.rfind(';');
      if (semi != std::string_view::npos) {
        // "@import x; sel" -- keep the part after the statement.
        prelude = TrimAscii(prelude.substr(semi + 1));
      }
    }
    if (!prelude.empty() && prelude[0] == '@') {
      int depth = 0;
      size_t j = brace;
      for (; j < css.size(); ++j) {
        if (css[j] == '{') ++depth;
        if (css[j] == '}' && --depth == 0) break;
      }
      i = j + 1;
      continue;
    }
    size_t close = css.find('}', brace);
    if (close == std::string::npos) close = css.size();
    auto decls = ParseDeclarations(std::string_view(css).substr(brace + 1, close - brace - 1));
    size_t s = 0;
    while (s <= prelude.size()) {
      size_t comma = prelude.find(',', s);
      if (comma == std::string_view::npos) comma = prelude.size();
      CssRule rule;
      if (ParseSelector(prelude.substr(s, comma - s), rule)) {
        rule.declarations = decls;
        rule.order = order++;
        rules.push_back(std::move(rule));
      }
      if (comma == prelude.size()) break;
      s = comma + 1;
    }
    i = close + 1;
  }
  return rules;
}

bool SelectorMatches(const CssRule& rule, const DomNode& el) {
  if (!el.is_element()) return false;
  if (!rule.tag.empty() && rule.tag != el.tag) return false;
  if (!rule.id.empty()) {
    const std::string* id = el.Attr("id");
    if (id == nullptr || *id != rule.id) return false;
  }
  if (!rule.classes.empty()) {
    const std::string* cls = el.Attr("class");
    if (cls == nullptr) return false;
    std::vector<std::string_view> tokens;
    std::string_view rest = *cls;
    while (!rest.empty()) {
      size_t start = 0;
      while (start < rest.size() && IsAsciiSpace(rest[start])) ++start;
      size_t end = start;
      while (end < rest.size() && !IsAsciiSpace(rest[end])) ++end;
      if (end > start) tokens.push_back(rest.substr(start, end - start));
      rest.remove_prefix(end);
    }
    for (const std::string& c : rule.classes) {
      if (std::find(tokens.begin(), tokens.end(), c) == tokens.end()) return false;
    }
  }
  return true;
}

std::optional<double> ParseFontSize(std::string_view value, double parent_px) {
  const std::string v = AsciiLower(TrimAscii(value));
  if (v == "small") return 13.0;
  if (v == "medium") return 16.0;
  if (v == "large") return 18.0;
  std::string_view unit;
  auto n = ParseNumberWithUnit(v, &unit);
  if (!n || *n <= 0) return std::nullopt;
  unit = TrimAscii(unit);
  if (unit == "px") return *n;
  if (unit == "em") return *n * parent_px;
  if (unit == "rem") return *n * kBaseFontSizePx;
  if (unit == "%") return *n / 100.0 * parent_px;
  if (unit == "pt") return *n * 4.0 / 3.0;
  return std::nullopt;
}

StyledNode ComputeStyles(const DomNode& dom, int /*viewport_width*/) {
  StyleResolver resolver(dom);
  ComputedStyle initial;
  return resolver.Resolve(dom, initial);
}

}  // namespace vprex
