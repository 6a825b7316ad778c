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

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "vprex/html.h"
#include "vprex/layout.h"
#include "vprex/text_util.h"

namespace vprex {
namespace {

struct Accumulated {
  bool has_rect = false;
  RectF rect;

  void Add(const RectF& r) {
    if (!has_rect) {
      rect = r;
      has_rect = true;
      return;
    }
    double x0 = std::min(rect.x, r.x);
    double y0 = std::min(rect.y, r.y);
    double x1 = std::max(rect.Right(), r.Right());
    double y1 = std::max(rect.Bottom(), r.Bottom());
    rect = {x0, y0, x1 - x0, y1 - y0};
  }
};

// Edges are rounded, not sizes, so adjacent boxes stay adjacent and no box
// ends below the rounded document height.
BoundingBox ToBox(const RectF& r) {
  const int x = RoundHalfUp(r.x);
  const int y = RoundHalfUp(r.y);
  return {x, y, RoundHalfUp(r.Right()) - x, RoundHalfUp(r.Bottom()) - y};
}

double OneDecimal(double v) { return std::floor(v * 10.0 + 0.5) / 10.0; }

bool IsActionTag(const std::string& tag) { return tag == "a" || tag == "button"; }

}  // namespace

bool IsLazyImage(const DomNode& img) {
  const std::string* loading = img.Attr("loading");
  if (loading != nullptr && AsciiLower(*loading) == "lazy") return true;
  const std::string* src = img.Attr("src");
  return img.HasAttr("data-src") && (src == nullptr || TrimAscii(*src).empty());
}

std::string ImageSource(const DomNode& img) {
  const std::string* src = img.Attr("src");
  if (src != nullptr && !TrimAscii(*src).empty()) return std::string(TrimAscii(*src));
  const std::string* data_src = img.Attr("data-src");
  if (data_src != nullptr) return std::string(TrimAscii(*data_src));
  return "";
}

VprDocument GenerateVpr(std::string_view url, std::string_view html,
                        int viewport_width) {
  auto dom = ParseHtml(html);
  return GenerateVpr(url, *dom, viewport_width);
}

VprDocument GenerateVpr(std::string_view url, const DomNode& dom,
                        int viewport_width) {
  const StyledNode styled = ComputeStyles(dom, viewport_width);
  const std::vector<LayoutBox> boxes = Layout(styled, viewport_width);

  std::unordered_map<const DomNode*, Accumulated> text_rects;
  std::unordered_map<const DomNode*, const LayoutBox*> text_style;
  std::unordered_map<const DomNode*, const LayoutBox*> images;
  std::unordered_map<const DomNode*, Accumulated> action_rects;
  double bottom = 0;

  for (const LayoutBox& box : boxes) {
    bottom = std::max(bottom, box.rect.Bottom());
    if (box.kind == LayoutBox::Kind::kText) {
      text_rects[box.node].Add(box.rect);
      text_style.emplace(box.node, &box);
    } else if (box.kind == LayoutBox::Kind::kImage) {
      images.emplace(box.node, &box);
    }
    if (box.kind == LayoutBox::Kind::kBlock && box.rect.height <= 0) continue;
    for (const DomNode* n = box.node; n != nullptr; n = n->parent) {
      if (n->is_element() && IsActionTag(n->tag)) action_rects[n].Add(box.rect);
    }
  }

  // Emitted nodes in document order.
  struct Emitted {
    const DomNode* node = nullptr;
    bool text = false;
    bool image = false;
    bool action = false;
    std::string own_text;
  };
  std::vector<Emitted> emitted;
  ForEachElement(dom, [&](const DomNode& el) {
    Emitted e;
    e.node = &el;
    if (text_rects.contains(&el)) {
      e.own_text = OwnText(el);
      e.text = !e.own_text.empty();
    }
    if (images.contains(&el) && !ImageSource(el).empty()) e.image = true;
    if (IsActionTag(el.tag) && action_rects.contains(&el)) e.action = true;
    if (e.text || e.image || e.action) emitted.push_back(std::move(e));
  });

  std::unordered_map<const DomNode*, int> xpath_ids;
  for (size_t i = 0; i < emitted.size(); ++i) {
    xpath_ids.emplace(emitted[i].node, static_cast<int>(i));
  }

  // Ancestor closure plus html/body, plus each kept node's preceding
  // same-tag element siblings so positional XPaths match the full DOM.
  std::unordered_set<const DomNode*> keep;
  keep.insert(&dom);
  if (const DomNode* body = Body(dom)) keep.insert(body);
  for (const Emitted& e : emitted) {
    for (const DomNode* n = e.node; n != nullptr && keep.insert(n).second; n = n->parent) {
    }
  }
  std::vector<const DomNode*> positional;
  for (const DomNode* n : keep) {
    if (n->parent == nullptr) continue;
    for (const auto& sib : n->parent->children) {
      if (sib.get() == n) break;
      if (sib->is_element() && sib->tag == n->tag) positional.push_back(sib.get());
    }
  }
  keep.insert(positional.begin(), positional.end());

  VprDocument doc;
  doc.url = std::string(url);
  if (const DomNode* title = FindFirst(dom, "title")) {
    doc.title = CollapseWhitespace(title->text);
  }
  doc.width = viewport_width;
  doc.height = RoundHalfUp(bottom);

  std::unordered_map<const DomNode*, int> tree_index;
  ForEachElement(dom, [&](const DomNode& el) {
    if (!keep.contains(&el)) return;
    XPathNode node;
    node.tag_name = el.tag;
    node.parent_id = el.parent == nullptr ? kRootParentId : tree_index.at(el.parent);
    auto id = xpath_ids.find(&el);
    if (id != xpath_ids.end()) node.xpath_id = id->second;
    tree_index.emplace(&el, static_cast<int>(doc.xpath_tree.size()));
    doc.xpath_tree.push_back(std::move(node));
  });

  for (const Emitted& e : emitted) {
    const int id = xpath_ids.at(e.node);
    if (e.image) {
      const LayoutBox* box = images.at(e.node);
      ImageElement img;
      img.box = ToBox(box->rect);
      img.xpath_id = id;
      img.src = ImageSource(*e.node);
      img.lazy = IsLazyImage(*e.node);
      img.size_unknown = box->size_unknown;
      doc.image_elements.push_back(std::move(img));
    }
    if (e.text) {
      const LayoutBox* first = text_style.at(e.node);
      TextElement t;
      t.box = ToBox(text_rects.at(e.node).rect);
      t.xpath_id = id;
      t.font_size = OneDecimal(first->style.font_size_px);
      t.line_through = first->style.line_through;
      t.text = e.own_text;
      doc.text_elements.push_back(std::move(t));
    }
    if (e.action) {
      ActionElement a;
      a.box = ToBox(action_rects.at(e.node).rect);
      a.xpath_id = id;
      const std::string* href = e.node->Attr("href");
      if (href != nullptr && !TrimAscii(*href).empty()) {
        a.href = std::string(TrimAscii(*href));
      }
      doc.action_elements.push_back(std::move(a));
    }
  }
  return doc;
}

}  // namespace vprex
