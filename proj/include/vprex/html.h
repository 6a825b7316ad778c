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

#ifndef VPREX_HTML_H_
#define VPREX_HTML_H_

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace vprex {

// Minimal DOM produced by the tolerant HTML parser. Element names and
// attribute names are lowercase. script/style/title/textarea keep their
// contents in `text` as raw text and have no child nodes.
struct DomNode {
  enum class Kind { kElement, kText };

  Kind kind = Kind::kElement;
  std::string tag;
  std::map<std::string, std::string> attributes;
  std::string text;
  std::vector<std::unique_ptr<DomNode>> children;
  DomNode* parent = nullptr;

  bool is_element() const { return kind == Kind::kElement; }
  bool is_text() const { return kind == Kind::kText; }

  // Returns nullptr when absent.
  const std::string* Attr(std::string_view name) const;
  bool HasAttr(std::string_view name) const {
    return Attr(name) != nullptr;
  }

  DomNode* AppendChild(std::unique_ptr<DomNode> child);
};

// Never fails: malformed markup is repaired, unclosed tags are auto-closed
// and the result always has html -> {head, body}.
std::unique_ptr<DomNode> ParseHtml(std::string_view html);

// Decodes character references (&amp;, &#36;, &#x20AC; ...).
std::string DecodeEntities(std::string_view in);

// Concatenation of the node's direct text children with whitespace collapsed
// and trimmed. U+00A0 counts as whitespace here.
std::string OwnText(const DomNode& node);

// Collapses runs of ASCII whitespace and U+00A0 to one space and trims.
std::string CollapseWhitespace(std::string_view in);

const DomNode* FindFirst(const DomNode& root, std::string_view tag);
const DomNode* Body(const DomNode& root);

// Rooted positional XPath of an element (/html[1]/body[1]/div[2]).
std::string DomXpath(const DomNode& node);

// Resolves a positional XPath produced by DomXpath; nullptr when no node
// matches.
const DomNode* ResolveXpath(const DomNode& root, std::string_view xpath);

// Pre-order walk over element nodes.
template <typename Fn>
void ForEachElement(const DomNode& node, Fn&& fn) {
  if (node.is_element()) fn(node);
  for (const auto& child : node.children) ForEachElement(*child, fn);
}

}  // namespace vprex

#endif  // VPREX_HTML_H_
