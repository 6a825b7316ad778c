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

#ifndef VPREX_STYLE_H_
#define VPREX_STYLE_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vprex/html.h"

namespace vprex {

inline constexpr double kBaseFontSizePx = 16.0;
inline constexpr int kDefaultViewportWidth = 1280;

// The CSS subset consumed by layout and by the feature extractors:
// display, visibility, font-size and line-through decoration. img elements
// additionally pick up pixel width/height.
struct ComputedStyle {
  enum class Display { kBlock, kInline, kNone };
  enum class Visibility { kVisible, kHidden };

  Display display = Display::kInline;
  Visibility visibility = Visibility::kVisible;
  double font_size_px = kBaseFontSizePx;
  bool line_through = false;
  std::optional<double> width_px;
  std::optional<double> height_px;
};

struct StyledNode {
  const DomNode* node = nullptr;
  ComputedStyle style;
  std::vector<StyledNode> children;
};

struct CssDeclaration {
  std::string property;
  std::string value;
  bool important = false;
};

struct CssRule {
  // Compound selector: optional tag, classes and id. No combinators.
  std::string tag;
  std::vector<std::string> classes;
  std::string id;
  std::vector<CssDeclaration> declarations;
  int order = 0;

  int Specificity() const {
    return (id.empty() ? 0 : 10000) + 100 * static_cast<int>(classes.size()) +
           (tag.empty() ? 0 : 1);
  }
};

// Parses a stylesheet. Selectors outside the supported subset and at-rules
// are skipped, as are unparseable declarations.
std::vector<CssRule> ParseStylesheet(std::string_view css, int first_order = 0);
std::vector<CssDeclaration> ParseDeclarations(std::string_view block);

bool SelectorMatches(const CssRule& rule, const DomNode& element);

// Parses a CSS font-size against the parent's size; nullopt if unsupported.
std::optional<double> ParseFontSize(std::string_view value, double parent_px);

StyledNode ComputeStyles(const DomNode& dom, int viewport_width);

}  // namespace vprex

#endif  // VPREX_STYLE_H_
