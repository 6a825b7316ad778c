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

#ifndef VPREX_LAYOUT_H_
#define VPREX_LAYOUT_H_

#include <vector>

#include "vprex/style.h"

namespace vprex {

// Fixed glyph model: every Unicode scalar advances 0.5em, lines are 1.2em.
inline constexpr double kGlyphAdvanceEm = 0.5;
inline constexpr double kLineHeightEm = 1.2;
inline constexpr double kDefaultImageSizePx = 100.0;

struct RectF {
  double x = 0;
  double y = 0;
  double width = 0;
  double height = 0;

  double Right() const { return x + width; }
  double Bottom() const { return y + height; }
};

struct LayoutBox {
  enum class Kind {
    kBlock,  // a block-level element's box
    kText,   // one line's run of text owned by `node`
    kImage,  // an img element
  };

  Kind kind = Kind::kBlock;
  // For kText this is the element owning the text, not the text node.
  const DomNode* node = nullptr;
  RectF rect;
  ComputedStyle style;
  bool size_unknown = false;  // kImage only
};

// Lays out the styled tree at the given viewport width. Boxes come out in
// document order of their first fragment. display:none and visibility:hidden
// content produces no boxes (hidden content still occupies space).
std::vector<LayoutBox> Layout(const StyledNode& root, int viewport_width);

// Half-up rounding used for every emitted pixel value.
int RoundHalfUp(double v);

}  // namespace vprex

#endif  // VPREX_LAYOUT_H_
