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

#include "vprex/layout.h"

#include <algorithm>
#include <cmath>

#include "vprex/text_util.h"

namespace vprex {
namespace {

class LayoutEngine {
 public:
  explicit LayoutEngine(std::vector<LayoutBox>& boxes) : boxes_(boxes) {}

  double LayoutBlock(const StyledNode& n, double x, double y, double width) {
    Flow flow;
    flow.x0 = x;
    flow.width = width;
    flow.y = y;
    for (const StyledNode& child : n.children) FlowNode(child, flow);
    FinishLine(flow);
    return flow.y - y;
  }

 private:
  struct Item {
    const DomNode* owner = nullptr;
    const ComputedStyle* style = nullptr;
    bool is_image = false;
    double x = 0;
    double width = 0;
    double height = 0;
    bool size_unknown = false;
  };

  struct Flow {
    double x0 = 0;
    double width = 0;
    double y = 0;
    std::vector<Item> line;
    double line_width = 0;
    bool pending_space = false;
    double pending_space_width = 0;
  };

  void FlowNode(const StyledNode& n, Flow& f) {
    if (n.style.display == ComputedStyle::Display::kNone) return;
    if (n.node->is_text()) {
      AddText(n, f);
      return;
    }
    if (n.style.display == ComputedStyle::Display::kBlock) {
      FinishLine(f);
      f.pending_space = false;
      const bool visible = n.style.visibility == ComputedStyle::Visibility::kVisible;
      size_t index = boxes_.size();
      if (visible) {
        boxes_.push_back({LayoutBox::Kind::kBlock, n.node, {}, n.style, false});
      }
      double top = f.y;
      double h = LayoutBlock(n, f.x0, top, f.width);
      if (visible) boxes_[index].rect = {f.x0, top, f.width, h};
      f.y += h;
      return;
    }
    const std::string& tag = n.node->tag;
    if (tag == "img") {
      Item item;
      item.owner = n.node;
      item.style = &n.style;
      item.is_image = true;
      item.width = n.style.width_px.value_or(kDefaultImageSizePx);
      item.height = n.style.height_px.value_or(kDefaultImageSizePx);
      item.size_unknown = !n.style.width_px || !n.style.height_px;
      Place(item, f);
      return;
    }
    if (tag == "br") {
      if (f.line.empty()) {
        f.y += kLineHeightEm * n.style.font_size_px;
      } else {
        FinishLine(f);
      }
      f.pending_space = false;
      return;
    }
    for (const StyledNode& child : n.children) FlowNode(child, f);
  }

  void AddText(const StyledNode& n, Flow& f) {
    const std::string& text = n.node->text;
    const double fs = n.style.font_size_px;
    size_t i = 0;
    while (i < text.size()) {
      if (IsAsciiSpace(text[i])) {
        while (i < text.size() && IsAsciiSpace(text[i])) ++i;
        f.pending_space = true;
        f.pending_space_width = kGlyphAdvanceEm * fs;
        continue;
      }
      size_t start = i;
      while (i < text.size() && !IsAsciiSpace(text[i])) ++i;
      Item item;
      item.owner = n.node->parent;
      item.style = &n.style;
      item.width = static_cast<double>(Utf8Length(std::string_view(text).substr(start, i - start))) *
                   kGlyphAdvanceEm * fs;
      item.height = kLineHeightEm * fs;
      Place(item, f);
    }
  }

  void Place(Item item, Flow& f) {
    double space = (!f.line.empty() && f.pending_space) ? f.pending_space_width : 0;
    if (!f.line.empty() && f.line_width + space + item.width > f.width) {
      FinishLine(f);
      space = 0;
    }
    item.x = f.x0 + f.line_width + space;
    f.line_width += space + item.width;
    f.line.push_back(item);
    f.pending_space = false;
  }

  void FinishLine(Flow& f) {
    if (f.line.empty()) return;
    double line_height = 0;
    for (const Item& it : f.line) line_height = std::max(line_height, it.height);
    size_t i = 0;
    while (i < f.line.size()) {
      const Item& first = f.line[i];
      const bool visible =
          first.style->visibility == ComputedStyle::Visibility::kVisible;
      if (first.is_image) {
        if (visible) {
          boxes_.push_back({LayoutBox::Kind::kImage, first.owner,
                            {first.x, f.y, first.width, first.height},
                            *first.style, first.size_unknown});
        }
        ++i;
        continue;
      }
      size_t j = i;
      double height = 0;
      while (j < f.line.size() && !f.line[j].is_image &&
             f.line[j].owner == first.owner) {
        height = std::max(height, f.line[j].height);
        ++j;
      }
      const Item& last = f.line[j - 1];
      if (visible) {
        boxes_.push_back({LayoutBox::Kind::kText, first.owner,
                          {first.x, f.y, last.x + last.width - first.x, height},
                          *first.style, false});
      }
      i = j;
    }
    f.y += line_height;
    f.line.clear();
    f.line_width = 0;
    f.pending_space = false;
  }

  std::vector<LayoutBox>& boxes_;
};

}  // namespace

int RoundHalfUp(double v) { return static_cast<int>(std::floor(v + 0.5)); }

std::vector<LayoutBox> Layout(const StyledNode& root, int viewport_width) {
  std::vector<LayoutBox> boxes;
  LayoutEngine engine(boxes);
  const double width = viewport_width;
  if (root.style.display == ComputedStyle::Display::kNone) return boxes;
  size_t index = boxes.size();
  boxes.push_back({LayoutBox::Kind::kBlock, root.node, {}, root.style, false});
  double h = engine.LayoutBlock(root, 0, 0, width);
  boxes[index].rect = {0, 0, width, h};
  if (root.style.visibility != ComputedStyle::Visibility::kVisible) boxes.clear();
  return boxes;
}

}  // namespace vprex
