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

#ifndef VPREX_VPR_H_
#define VPREX_VPR_H_

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace vprex {

// Visual Page Representation: the visible text, image and action elements of
// a rendered page with their geometry and style, plus the DOM-derived tree
// needed to address each element by XPath.

inline constexpr int kRootParentId = -1;
inline constexpr char kVprVersion[] = "1";

struct BoundingBox {
  int x = 0;
  int y = 0;
  int width = 0;
  int height = 0;

  long long Area() const { return static_cast<long long>(width) * height; }
  double CenterX() const { return x + width / 2.0; }
  double CenterY() const { return y + height / 2.0; }
  bool Contains(double px, double py) const {
    return px >= x && px <= x + width && py >= y && py <= y + height;
  }

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

struct ImageElement {
  BoundingBox box;
  int xpath_id = 0;
  std::string src;
  // Renderer hints, serialized only when set.
  bool lazy = false;
  bool size_unknown = false;

  friend bool operator==(const ImageElement&, const ImageElement&) = default;
};

struct TextElement {
  BoundingBox box;
  int xpath_id = 0;
  double font_size = 16.0;
  bool line_through = false;
  std::string text;

  friend bool operator==(const TextElement&, const TextElement&) = default;
};

struct ActionElement {
  BoundingBox box;
  int xpath_id = 0;
  std::optional<std::string> href;

  friend bool operator==(const ActionElement&, const ActionElement&) = default;
};

struct XPathNode {
  std::string tag_name;
  int parent_id = kRootParentId;  // index into VprDocument::xpath_tree
  std::optional<int> xpath_id;

  friend bool operator==(const XPathNode&, const XPathNode&) = default;
};

struct VprDocument {
  std::string url;
  std::string title;
  int width = 0;
  int height = 0;
  std::vector<ImageElement> image_elements;
  std::vector<TextElement> text_elements;
  std::vector<ActionElement> action_elements;
  std::vector<XPathNode> xpath_tree;
  std::string version = kVprVersion;

  friend bool operator==(const VprDocument&, const VprDocument&) = default;
};

struct Violation {
  enum class Severity { kError, kWarning };
  std::string field;
  std::string rule;
  Severity severity = Severity::kError;

  friend bool operator==(const Violation&, const Violation&) = default;
};

// Parses a .vpr.json document. Unknown fields are ignored and reported in
// `warnings` when non-null. Throws Error(kMalformedJson) on bad JSON and
// Error(kSchemaViolation) on a missing/mistyped field or a failed invariant.
VprDocument ParseVpr(std::string_view json_text,
                     std::vector<std::string>* warnings = nullptr);

// Canonical compact JSON: keys in schema order, integers without a decimal
// point, optional fields omitted when absent.
std::string SerializeVpr(const VprDocument& doc);

// Returns all invariant violations. Errors make a document invalid; warnings
// (e.g. negative coordinates from overflow) do not.
std::vector<Violation> Validate(const VprDocument& doc);
bool IsValid(const VprDocument& doc);

// xpathId -> index into xpath_tree.
std::unordered_map<int, int> BuildXpathIndex(const VprDocument& doc);

// Rooted positional XPath such as /html[1]/body[1]/div[2]. Throws
// Error(kUnknownXpathId) when the id does not resolve.
std::string XpathString(const VprDocument& doc, int xpath_id);
std::string XpathStringForNode(const VprDocument& doc, int node_index);

// XPath of every xpath_tree node, computed in one pass.
std::vector<std::string> AllXpathStrings(const VprDocument& doc);

// Inverse of XpathString over nodes carrying an xpathId; nullopt if none.
std::optional<int> FindXpathId(const VprDocument& doc, std::string_view xpath);

}  // namespace vprex

#endif  // VPREX_VPR_H_
