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

#include "vprex/vpr.h"

#include <algorithm>
#include <map>
#include <set>
#include <utility>

#include "json.hpp"
#include "vprex/error.h"

namespace vprex {
namespace {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

[[noreturn]] void Fail(const std::string& field, const std::string& reason) {
  throw Error(ErrorCode::kSchemaViolation, field + ": " + reason);
}

const Json& Require(const Json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) Fail(path + "." + key, "missing");
  return *it;
}

int RequireInt(const Json& obj, const char* key, const std::string& path) {
  const Json& v = Require(obj, key, path);
  if (!v.is_number_integer()) Fail(path + "." + key, "expected integer");
  return v.get<int>();
}

std::string RequireString(const Json& obj, const char* key,
                          const std::string& path) {
  const Json& v = Require(obj, key, path);
  if (!v.is_string()) Fail(path + "." + key, "expected string");
  return v.get<std::string>();
}

bool OptionalBool(const Json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) return false;
  if (!it->is_boolean()) Fail(path + "." + key, "expected boolean");
  return it->get<bool>();
}

void WarnUnknown(const Json& obj, std::initializer_list<std::string_view> known,
                 const std::string& path, std::vector<std::string>* warnings) {
  if (warnings == nullptr) return;
  for (const auto& [key, value] : obj.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      warnings->push_back("ignored unknown field " + path + "." + key);
    }
  }
}

BoundingBox ParseBox(const Json& obj, const std::string& path) {
  return BoundingBox{RequireInt(obj, "x", path), RequireInt(obj, "y", path),
                     RequireInt(obj, "width", path),
                     RequireInt(obj, "height", path)};
}

const Json& RequireArray(const Json& obj, const char* key,
                         const std::string& path) {
  const Json& v = Require(obj, key, path);
  if (!v.is_array()) Fail(path + "." + key, "expected array");
  return v;
}

void CheckObject(const Json& v, const std::string& path) {
  if (!v.is_object()) Fail(path, "expected object");
}

void PutBox(OrderedJson& out, const BoundingBox& box) {
  out["x"] = box.x;
  out["y"] = box.y;
  out["width"] = box.width;
  out["height"] = box.height;
}

std::string Indexed(const char* list, size_t i) {
  return std::string(list) + "[" + std::to_string(i) + "]";
}

bool IsBlank(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
           c == '\v';
  });
}

}  // namespace

VprDocument ParseVpr(std::string_view json_text,
                     std::vector<std::string>* warnings) {
  Json root;
  try {
    root = Json::parse(json_text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kMalformedJson, e.what());
  }
  CheckObject(root, "$");
  WarnUnknown(root,
              {"url", "title", "width", "height", "imageElements",
               "textElements", "actionElements", "xpathTree", "version"},
              "$", warnings);

  VprDocument doc;
  doc.url = RequireString(root, "url", "$");
  doc.title = RequireString(root, "title", "$");
  doc.width = RequireInt(root, "width", "$");
  doc.height = RequireInt(root, "height", "$");
  doc.version = RequireString(root, "version", "$");

  const Json& images = RequireArray(root, "imageElements", "$");
  for (size_t i = 0; i < images.size(); ++i) {
    const std::string path = Indexed("imageElements", i);
    CheckObject(images[i], path);
    WarnUnknown(images[i],
                {"x", "y", "width", "height", "xpathId", "src", "lazy",
                 "sizeUnknown"},
                path, warnings);
    ImageElement e;
    e.box = ParseBox(images[i], path);
    e.xpath_id = RequireInt(images[i], "xpathId", path);
    e.src = RequireString(images[i], "src", path);
    e.lazy = OptionalBool(images[i], "lazy", path);
    e.size_unknown = OptionalBool(images[i], "sizeUnknown", path);
    doc.image_elements.push_back(std::move(e));
  }

  const Json& texts = RequireArray(root, "textElements", "$");
  for (size_t i = 0; i < texts.size(); ++i) {
    const std::string path = Indexed("textElements", i);
    CheckObject(texts[i], path);
    WarnUnknown(texts[i],
                {"x", "y", "width", "height", "xpathId", "fontSize",
                 "lineThrough", "text"},
                path, warnings);
    TextElement e;
    e.box = ParseBox(texts[i], path);
    e.xpath_id = RequireInt(texts[i], "xpathId", path);
    const Json& fs = Require(texts[i], "fontSize", path);
    if (!fs.is_number()) Fail(path + ".fontSize", "expected number");
    e.font_size = fs.get<double>();
    const Json& lt = Require(texts[i], "lineThrough", path);
    if (!lt.is_boolean()) Fail(path + ".lineThrough", "expected boolean");
    e.line_through = lt.get<bool>();
    e.text = RequireString(texts[i], "text", path);
    doc.text_elements.push_back(std::move(e));
  }

  const Json& actions = RequireArray(root, "actionElements", "$");
  for (size_t i = 0; i < actions.size(); ++i) {
    const std::string path = Indexed("actionElements", i);
    CheckObject(actions[i], path);
    WarnUnknown(actions[i], {"x", "y", "width", "height", "xpathId", "href"},
                path, warnings);
    ActionElement e;
    e.box = ParseBox(actions[i], path);
    e.xpath_id = RequireInt(actions[i], "xpathId", path);
    if (actions[i].contains("href")) {
      e.href = RequireString(actions[i], "href", path);
    }
    doc.action_elements.push_back(std::move(e));
  }

  const Json& tree = RequireArray(root, "xpathTree", "$");
  for (size_t i = 0; i < tree.size(); ++i) {
    const std::string path = Indexed("xpathTree", i);
    CheckObject(tree[i], path);
    WarnUnknown(tree[i], {"tagName", "parentId", "xpathId"}, path, warnings);
    XPathNode n;
    n.tag_name = RequireString(tree[i], "tagName", path);
    n.parent_id = RequireInt(tree[i], "parentId", path);
    if (tree[i].contains("xpathId")) {
      n.xpath_id = RequireInt(tree[i], "xpathId", path);
    }
    doc.xpath_tree.push_back(std::move(n));
  }

  for (const Violation& v : Validate(doc)) {
    if (v.severity == Violation::Severity::kError) Fail(v.field, v.rule);
  }
  return doc;
}

std::string SerializeVpr(const VprDocument& doc) {
  OrderedJson out;
  out["url"] = doc.url;
  out["title"] = doc.title;
  out["width"] = doc.width;
  out["height"] = doc.height;

  OrderedJson images = OrderedJson::array();
  for (const ImageElement& e : doc.image_elements) {
    OrderedJson j;
    PutBox(j, e.box);
    j["xpathId"] = e.xpath_id;
    j["src"] = e.src;
    if (e.lazy) j["lazy"] = true;
    if (e.size_unknown) j["sizeUnknown"] = true;
    images.push_back(std::move(j));
  }
  out["imageElements"] = std::move(images);

  OrderedJson texts = OrderedJson::array();
  for (const TextElement& e : doc.text_elements) {
    OrderedJson j;
    PutBox(j, e.box);
    j["xpathId"] = e.xpath_id;
    j["fontSize"] = e.font_size;
    j["lineThrough"] = e.line_through;
    j["text"] = e.text;
    texts.push_back(std::move(j));
  }
  out["textElements"] = std::move(texts);

  OrderedJson actions = OrderedJson::array();
  for (const ActionElement& e : doc.action_elements) {
    OrderedJson j;
    PutBox(j, e.box);
    j["xpathId"] = e.xpath_id;
    if (e.href) j["href"] = *e.href;
    actions.push_back(std::move(j));
  }
  out["actionElements"] = std::move(actions);

  OrderedJson tree = OrderedJson::array();
  for (const XPathNode& n : doc.xpath_tree) {
    OrderedJson j;
    j["tagName"] = n.tag_name;
    j["parentId"] = n.parent_id;
    if (n.xpath_id) j["xpathId"] = *n.xpath_id;
    tree.push_back(std::move(j));
  }
  out["xpathTree"] = std::move(tree);
  out["version"] = doc.version;
  return out.dump(-1, ' ', false, OrderedJson::error_handler_t::replace);
}

std::vector<Violation> Validate(const VprDocument& doc) {
  std::vector<Violation> out;
  auto error = [&out](std::string field, std::string rule) {
    out.push_back({std::move(field), std::move(rule),
                   Violation::Severity::kError});
  };
  auto warn = [&out](std::string field, std::string rule) {
    out.push_back({std::move(field), std::move(rule),
                   Violation::Severity::kWarning});
  };

  if (doc.width <= 0) error("width", "positive");
  if (doc.height < 0) error("height", "non-negative");

  std::set<int> ids;
  for (size_t i = 0; i < doc.xpath_tree.size(); ++i) {
    const XPathNode& n = doc.xpath_tree[i];
    const std::string path = Indexed("xpathTree", i);
    if (n.tag_name.empty()) error(path + ".tagName", "non-empty");
    if (std::any_of(n.tag_name.begin(), n.tag_name.end(),
                    [](char c) { return c >= 'A' && c <= 'Z'; })) {
      error(path + ".tagName", "lowercase");
    }
    if (i == 0) {
      if (n.parent_id != kRootParentId) error(path + ".parentId", "root sentinel");
    } else if (n.parent_id < 0 || n.parent_id >= static_cast<int>(i)) {
      error(path + ".parentId", "parent precedes child");
    }
    if (n.xpath_id) {
      if (*n.xpath_id < 0) error(path + ".xpathId", "non-negative");
      if (!ids.insert(*n.xpath_id).second) error(path + ".xpathId", "unique");
    }
  }

  auto check_box = [&](const BoundingBox& box, const std::string& path) {
    if (box.width < 0) error(path + ".width", "non-negative");
    if (box.height < 0) error(path + ".height", "non-negative");
    if (box.x < 0) warn(path + ".x", "overflows canvas left");
    if (box.y < 0) warn(path + ".y", "overflows canvas top");
  };
  auto check_ref = [&](int xpath_id, const std::string& path) {
    if (!ids.contains(xpath_id)) error(path + ".xpathId", "resolves in xpathTree");
  };
  auto check_order = [&](int prev, int cur, const std::string& path) {
    if (cur <= prev) error(path + ".xpathId", "document order");
  };

  int prev = -1;
  for (size_t i = 0; i < doc.image_elements.size(); ++i) {
    const ImageElement& e = doc.image_elements[i];
    const std::string path = Indexed("imageElements", i);
    check_box(e.box, path);
    check_ref(e.xpath_id, path);
    if (i > 0) check_order(prev, e.xpath_id, path);
    prev = e.xpath_id;
    if (e.src.empty()) error(path + ".src", "non-empty");
  }
  for (size_t i = 0; i < doc.text_elements.size(); ++i) {
    const TextElement& e = doc.text_elements[i];
    const std::string path = Indexed("textElements", i);
    check_box(e.box, path);
    check_ref(e.xpath_id, path);
    if (i > 0) check_order(prev, e.xpath_id, path);
    prev = e.xpath_id;
    if (!(e.font_size > 0)) error(path + ".fontSize", "positive");
    if (IsBlank(e.text)) error(path + ".text", "non-empty");
  }
  for (size_t i = 0; i < doc.action_elements.size(); ++i) {
    const ActionElement& e = doc.action_elements[i];
    const std::string path = Indexed("actionElements", i);
    check_box(e.box, path);
    check_ref(e.xpath_id, path);
    if (i > 0) check_order(prev, e.xpath_id, path);
    prev = e.xpath_id;
    if (e.href && e.href->empty()) error(path + ".href", "non-empty");
  }
  return out;
}

bool IsValid(const VprDocument& doc) {
  for (const Violation& v : Validate(doc)) {
    if (v.severity == Violation::Severity::kError) return false;
  }
  return true;
}

std::unordered_map<int, int> BuildXpathIndex(const VprDocument& doc) {
  std::unordered_map<int, int> index;
  for (size_t i = 0; i < doc.xpath_tree.size(); ++i) {
    if (doc.xpath_tree[i].xpath_id) {
      index.emplace(*doc.xpath_tree[i].xpath_id, static_cast<int>(i));
    }
  }
  return index;
}

std::string XpathStringForNode(const VprDocument& doc, int node_index) {
  const auto& tree = doc.xpath_tree;
  std::vector<std::string> steps;
  int cur = node_index;
  while (cur >= 0 && cur < static_cast<int>(tree.size())) {
    const XPathNode& n = tree[cur];
    int position = 1;
    for (int j = 0; j < cur; ++j) {
      if (tree[j].parent_id == n.parent_id && tree[j].tag_name == n.tag_name) {
        ++position;
      }
    }
    steps.push_back(n.tag_name + "[" + std::to_string(position) + "]");
    if (n.parent_id >= cur) break;  // malformed; stop rather than loop
    cur = n.parent_id;
  }
  std::string out;
  for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
    out += "/";
    out += *it;
  }
  return out;
}

std::vector<std::string> AllXpathStrings(const VprDocument& doc) {
  const auto& tree = doc.xpath_tree;
  std::vector<std::string> out(tree.size());
  std::map<std::pair<int, std::string_view>, int> counts;
  for (size_t i = 0; i < tree.size(); ++i) {
    const XPathNode& n = tree[i];
    int position = ++counts[{n.parent_id, n.tag_name}];
    std::string step = "/" + n.tag_name + "[" + std::to_string(position) + "]";
    if (n.parent_id >= 0 && n.parent_id < static_cast<int>(i)) {
      out[i] = out[n.parent_id] + step;
    } else {
      out[i] = std::move(step);
    }
  }
  return out;
}

std::optional<int> FindXpathId(const VprDocument& doc, std::string_view xpath) {
  const std::vector<std::string> paths = AllXpathStrings(doc);
  for (size_t i = 0; i < paths.size(); ++i) {
    if (paths[i] == xpath && doc.xpath_tree[i].xpath_id) {
      return doc.xpath_tree[i].xpath_id;
    }
  }
  return std::nullopt;
}

std::string XpathString(const VprDocument& doc, int xpath_id) {
  for (size_t i = 0; i < doc.xpath_tree.size(); ++i) {
    if (doc.xpath_tree[i].xpath_id == xpath_id) {
      return XpathStringForNode(doc, static_cast<int>(i));
    }
  }
  throw Error(ErrorCode::kUnknownXpathId, std::to_string(xpath_id));
}

}  // namespace vprex
