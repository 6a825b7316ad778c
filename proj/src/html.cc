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

#include "vprex/html.h"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <unordered_map>
#include <unordered_set>

#include "vprex/text_util.h"

namespace vprex {
namespace {

const std::unordered_set<std::string_view>& VoidTags() {
  static const std::unordered_set<std::string_view> tags = {
      "area", "base", "br",   "col",   "embed",  "hr",    "img",
      "input", "link", "meta", "param", "source", "track", "wbr"};
  return tags;
}

const std::unordered_set<std::string_view>& RawTextTags() {
  static const std::unordered_set<std::string_view> tags = {
      "script", "style", "title", "textarea", "xmp"};
  return tags;
}

const std::unordered_set<std::string_view>& HeadTags() {
  static const std::unordered_set<std::string_view> tags = {
      "title", "meta", "link", "style", "script", "base", "noscript"};
  return tags;
}

// Start tags that implicitly close an open <p>.
const std::unordered_set<std::string_view>& ClosesParagraph() {
  static const std::unordered_set<std::string_view> tags = {
      "address", "article", "aside", "blockquote", "details", "div",
      "dl",      "fieldset", "figure", "footer",   "form",    "h1",
      "h2",      "h3",       "h4",     "h5",       "h6",      "header",
      "hr",      "li",       "main",   "menu",     "nav",     "ol",
      "p",       "pre",      "section", "table",   "ul"};
  return tags;
}

bool IsHeading(std::string_view tag) {
  return tag.size() == 2 && tag[0] == 'h' && tag[1] >= '1' && tag[1] <= '6';
}

const std::unordered_map<std::string_view, char32_t>& NamedEntities() {
  static const std::unordered_map<std::string_view, char32_t> table = {
      {"amp", '&'},       {"lt", '<'},        {"gt", '>'},
      {"quot", '"'},      {"apos", '\''},     {"nbsp", 0xA0},
      {"copy", 0xA9},     {"reg", 0xAE},      {"trade", 0x2122},
      {"euro", 0x20AC},   {"pound", 0xA3},    {"yen", 0xA5},
      {"cent", 0xA2},     {"hellip", 0x2026}, {"mdash", 0x2014},
      {"ndash", 0x2013},  {"laquo", 0xAB},    {"raquo", 0xBB},
      {"times", 0xD7},    {"middot", 0xB7},   {"bull", 0x2022},
      {"lsquo", 0x2018},  {"rsquo", 0x2019},  {"ldquo", 0x201C},
      {"rdquo", 0x201D},  {"deg", 0xB0},      {"frac12", 0xBD},
      {"star", 0x2606},   {"check", 0x2713},  {"rarr", 0x2192},
      {"larr", 0x2190}};
  return table;
}

bool IsTagNameChar(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c == '-' || c == '_' || c == ':';
}

bool IsAlpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

class TreeBuilder {
 public:
  explicit TreeBuilder(std::string_view html) : in_(html) {
    root_ = std::make_unique<DomNode>();
    root_->tag = "html";
    head_ = root_->AppendChild(NewElement("head"));
    body_ = root_->AppendChild(NewElement("body"));
    stack_ = {root_.get(), body_};
  }

  std::unique_ptr<DomNode> Build() {
    while (pos_ < in_.size()) {
      if (in_[pos_] == '<') {
        if (StartsWith("<!--")) {
          SkipPast("-->", 4);
        } else if (StartsWith("<!") || StartsWith("<?")) {
          SkipPast(">", 2);
        } else if (StartsWith("</") && pos_ + 2 < in_.size() &&
                   IsAlpha(in_[pos_ + 2])) {
          ReadEndTag();
        } else if (pos_ + 1 < in_.size() && IsAlpha(in_[pos_ + 1])) {
          ReadStartTag();
        } else {
          AddText("<");
          ++pos_;
        }
      } else {
        size_t end = in_.find('<', pos_);
        if (end == std::string_view::npos) end = in_.size();
        AddText(DecodeEntities(in_.substr(pos_, end - pos_)));
        pos_ = end;
      }
    }
    return std::move(root_);
  }

 private:
  static std::unique_ptr<DomNode> NewElement(std::string tag) {
    auto node = std::make_unique<DomNode>();
    node->kind = DomNode::Kind::kElement;
    node->tag = std::move(tag);
    return node;
  }

  bool StartsWith(std::string_view prefix) const {
    return in_.substr(pos_, prefix.size()) == prefix;
  }

  void SkipPast(std::string_view terminator, size_t skip) {
    size_t end = in_.find(terminator, pos_ + skip);
    pos_ = end == std::string_view::npos ? in_.size() : end + terminator.size();
  }

  void SkipSpace() {
    while (pos_ < in_.size() && IsAsciiSpace(in_[pos_])) ++pos_;
  }

  std::string ReadName() {
    size_t start = pos_;
    while (pos_ < in_.size() && IsTagNameChar(in_[pos_])) ++pos_;
    return AsciiLower(in_.substr(start, pos_ - start));
  }

  DomNode* Current() const { return stack_.back(); }

  bool InBody() const { return in_body_; }

  void AddText(std::string_view text) {
    if (text.empty()) return;
    if (!InBody()) {
      if (TrimAscii(text).empty()) return;
      in_body_ = true;
    }
    DomNode* parent = Current();
    if (!parent->children.empty() && parent->children.back()->is_text()) {
      parent->children.back()->text += text;
      return;
    }
    auto node = std::make_unique<DomNode>();
    node->kind = DomNode::Kind::kText;
    node->text = std::string(text);
    parent->AppendChild(std::move(node));
  }

  // Pops up to and including the nearest open `tag`, not crossing any of
  // `boundaries`. Returns false when no such element is open.
  bool CloseIfOpen(std::string_view tag,
                   std::initializer_list<std::string_view> boundaries) {
    for (size_t i = stack_.size(); i-- > 2;) {
      const std::string& t = stack_[i]->tag;
      if (t == tag) {
        stack_.resize(i);
        return true;
      }
      if (std::find(boundaries.begin(), boundaries.end(), t) !=
          boundaries.end()) {
        return false;
      }
    }
    return false;
  }

  void ApplyImplicitCloses(const std::string& tag) {
    if (ClosesParagraph().contains(tag)) {
      CloseIfOpen("p", {"table", "td", "th", "button", "li"});
    }
    if (tag == "li") {
      CloseIfOpen("li", {"ul", "ol", "menu"});
    } else if (tag == "dt" || tag == "dd") {
      if (!CloseIfOpen("dt", {"dl"})) CloseIfOpen("dd", {"dl"});
    } else if (tag == "tr") {
      CloseIfOpen("td", {"tr", "table"});
      CloseIfOpen("th", {"tr", "table"});
      CloseIfOpen("tr", {"table"});
    } else if (tag == "td" || tag == "th") {
      if (!CloseIfOpen("td", {"tr", "table"})) CloseIfOpen("th", {"tr", "table"});
    } else if (tag == "option") {
      CloseIfOpen("option", {"select"});
    } else if (IsHeading(tag) && IsHeading(Current()->tag)) {
      stack_.pop_back();
    }
  }

  void ReadAttributes(DomNode& node, bool& self_closing) {
    self_closing = false;
    while (pos_ < in_.size()) {
      SkipSpace();
      if (pos_ >= in_.size()) return;
      char c = in_[pos_];
      if (c == '>') {
        ++pos_;
        return;
      }
      if (c == '/') {
        ++pos_;
        if (pos_ < in_.size() && in_[pos_] == '>') {
          self_closing = true;
          ++pos_;
          return;
        }
        continue;
      }
      size_t start = pos_;
      while (pos_ < in_.size() && !IsAsciiSpace(in_[pos_]) && in_[pos_] != '=' &&
             in_[pos_] != '>' && !(in_[pos_] == '/' && pos_ + 1 < in_.size() &&
                                   in_[pos_ + 1] == '>')) {
        ++pos_;
      }
      std::string name = AsciiLower(in_.substr(start, pos_ - start));
      if (name.empty()) {
        ++pos_;
        continue;
      }
      SkipSpace();
      std::string value;
      if (pos_ < in_.size() && in_[pos_] == '=') {
        ++pos_;
        SkipSpace();
        if (pos_ < in_.size() && (in_[pos_] == '"' || in_[pos_] == '\'')) {
          char quote = in_[pos_++];
          size_t end = in_.find(quote, pos_);
          if (end == std::string_view::npos) end = in_.size();
          value = DecodeEntities(in_.substr(pos_, end - pos_));
          pos_ = std::min(end + 1, in_.size());
        } else {
          size_t vstart = pos_;
          while (pos_ < in_.size() && !IsAsciiSpace(in_[pos_]) &&
                 in_[pos_] != '>') {
            ++pos_;
          }
          value = DecodeEntities(in_.substr(vstart, pos_ - vstart));
        }
      }
      node.attributes.emplace(std::move(name), std::move(value));
    }
  }

  void ReadRawText(DomNode& node) {
    const std::string close = "</" + node.tag;
    size_t p = pos_;
    while (true) {
      p = in_.find("</", p);
      if (p == std::string_view::npos) {
        p = in_.size();
        break;
      }
      if (AsciiLower(in_.substr(p, close.size())) == close) break;
      p += 2;
    }
    std::string_view raw = in_.substr(pos_, p - pos_);
    node.text = node.tag == "title" || node.tag == "textarea"
                    ? DecodeEntities(raw)
                    : std::string(raw);
    pos_ = p;
    if (pos_ < in_.size()) SkipPast(">", 0);
  }

  void ReadStartTag() {
    ++pos_;  // '<'
    std::string tag = ReadName();
    auto node = NewElement(tag);
    bool self_closing = false;
    ReadAttributes(*node, self_closing);

    if (tag == "html" || tag == "body") {
      DomNode* target = tag == "html" ? root_.get() : body_;
      for (auto& [k, v] : node->attributes) target->attributes.emplace(k, v);
      if (tag == "body") in_body_ = true;
      return;
    }
    if (tag == "head") return;

    const bool raw = RawTextTags().contains(tag);
    if (!InBody() && HeadTags().contains(tag)) {
      DomNode* added = head_->AppendChild(std::move(node));
      if (raw) ReadRawText(*added);
      return;
    }
    in_body_ = true;
    ApplyImplicitCloses(tag);
    DomNode* added = Current()->AppendChild(std::move(node));
    if (raw) {
      ReadRawText(*added);
    } else if (!self_closing && !VoidTags().contains(tag)) {
      stack_.push_back(added);
    }
  }

  void ReadEndTag() {
    pos_ += 2;
    std::string tag = ReadName();
    SkipPast(">", 0);
    if (tag == "html" || tag == "body" || tag == "head") return;
    for (size_t i = stack_.size(); i-- > 2;) {
      if (stack_[i]->tag == tag) {
        stack_.resize(i);
        return;
      }
    }
  }

  std::string_view in_;
  size_t pos_ = 0;
  std::unique_ptr<DomNode> root_;
  DomNode* head_ = nullptr;
  DomNode* body_ = nullptr;
  std::vector<DomNode*> stack_;
  bool in_body_ = false;
};

bool IsCollapsible(std::string_view s, size_t i, size_t* width) {
  if (IsAsciiSpace(s[i])) {
    *width = 1;
    return true;
  }
  if (static_cast<unsigned char>(s[i]) == 0xC2 && i + 1 < s.size() &&
      static_cast<unsigned char>(s[i + 1]) == 0xA0) {
    *width = 2;
    return true;
  }
  return false;
}

}  // namespace

const std::string* DomNode::Attr(std::string_view name) const {
  auto it = attributes.find(std::string(name));
  return it == attributes.end() ? nullptr : &it->second;
}

DomNode* DomNode::AppendChild(std::unique_ptr<DomNode> child) {
  child->parent = this;
  children.push_back(std::move(child));
  return children.back().get();
}

std::unique_ptr<DomNode> ParseHtml(std::string_view html) {
  return TreeBuilder(html).Build();
}

std::string DecodeEntities(std::string_view in) {
  std::string out;
  out.reserve(in.size());
  size_t i = 0;
  while (i < in.size()) {
    if (in[i] != '&') {
      out.push_back(in[i++]);
      continue;
    }
    size_t semi = in.find(';', i + 1);
    if (semi == std::string_view::npos || semi - i > 12) {
      out.push_back(in[i++]);
      continue;
    }
    std::string_view name = in.substr(i + 1, semi - i - 1);
    char32_t cp = 0;
    bool ok = false;
    if (!name.empty() && name[0] == '#') {
      std::string digits(name.substr(1));
      int base = 10;
      if (!digits.empty() && (digits[0] == 'x' || digits[0] == 'X')) {
        base = 16;
        digits.erase(0, 1);
      }
      char* end = nullptr;
      unsigned long v = digits.empty() ? 0 : std::strtoul(digits.c_str(), &end, base);
      if (!digits.empty() && end != nullptr && *end == '\0' && v > 0 &&
          v < 0x110000) {
        cp = static_cast<char32_t>(v);
        ok = true;
      }
    } else {
      auto it = NamedEntities().find(name);
      if (it != NamedEntities().end()) {
        cp = it->second;
        ok = true;
      }
    }
    if (ok) {
      AppendUtf8(out, cp);
      i = semi + 1;
    } else {
      out.push_back(in[i++]);
    }
  }
  return out;
}

std::string CollapseWhitespace(std::string_view in) {
  std::string out;
  out.reserve(in.size());
  bool pending_space = false;
  size_t i = 0;
  while (i < in.size()) {
    size_t w = 0;
    if (IsCollapsible(in, i, &w)) {
      pending_space = !out.empty();
      i += w;
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(in[i++]);
  }
  return out;
}

std::string OwnText(const DomNode& node) {
  std::string raw;
  for (const auto& child : node.children) {
    if (child->is_text()) {
      raw += child->text;
    } else {
      raw.push_back(' ');
    }
  }
  return CollapseWhitespace(raw);
}

const DomNode* FindFirst(const DomNode& root, std::string_view tag) {
  if (root.is_element() && root.tag == tag) return &root;
  for (const auto& child : root.children) {
    if (const DomNode* found = FindFirst(*child, tag)) return found;
  }
  return nullptr;
}

const DomNode* Body(const DomNode& root) {
  for (const auto& child : root.children) {
    if (child->is_element() && child->tag == "body") return child.get();
  }
  return nullptr;
}

std::string DomXpath(const DomNode& node) {
  std::vector<std::string> steps;
  const DomNode* cur = &node;
  while (cur != nullptr) {
    int position = 1;
    if (cur->parent != nullptr) {
      for (const auto& sib : cur->parent->children) {
        if (sib.get() == cur) break;
        if (sib->is_element() && sib->tag == cur->tag) ++position;
      }
    }
    steps.push_back(cur->tag + "[" + std::to_string(position) + "]");
    cur = cur->parent;
  }
  std::string out;
  for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
    out += "/";
    out += *it;
  }
  return out;
}

const DomNode* ResolveXpath(const DomNode& root, std::string_view xpath) {
  const DomNode* cur = nullptr;
  size_t i = 0;
  while (i < xpath.size()) {
    if (xpath[i] != '/') return nullptr;
    size_t open = xpath.find('[', i);
    size_t close = xpath.find(']', i);
    if (open == std::string_view::npos || close == std::string_view::npos ||
        close < open) {
      return nullptr;
    }
    std::string_view tag = xpath.substr(i + 1, open - i - 1);
    int position = std::atoi(std::string(xpath.substr(open + 1, close - open - 1)).c_str());
    if (cur == nullptr) {
      if (tag != root.tag || position != 1) return nullptr;
      cur = &root;
    } else {
      const DomNode* next = nullptr;
      int seen = 0;
      for (const auto& child : cur->children) {
        if (child->is_element() && child->tag == tag && ++seen == position) {
          next = child.get();
          break;
        }
      }
      if (next == nullptr) return nullptr;
      cur = next;
    }
    i = close + 1;
  }
  return cur;
}

}  // namespace vprex
