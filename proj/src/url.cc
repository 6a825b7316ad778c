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

#include "vprex/url.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <vector>

#include "vprex/text_util.h"

namespace vprex {
namespace {

constexpr std::array<std::string_view, 24> kMultiLabelSuffixes = {
    "co.uk", "org.uk", "ac.uk", "gov.uk", "com.au", "net.au", "org.au", "co.nz",
    "co.jp",  "ne.jp",  "or.jp", "com.br", "com.mx", "com.cn", "com.hk", "com.sg",
    "co.in",  "co.kr",  "com.tr", "co.za", "com.ar", "com.tw", "co.il", "github.io",
};

std::string RemoveDotSegments(std::string_view path) {
  std::vector<std::string> out;
  size_t i = 0;
  const bool absolute = !path.empty() && path.front() == '/';
  if (absolute) i = 1;
  bool trailing = false;
  while (i <= path.size()) {
    size_t slash = path.find('/', i);
    if (slash == std::string_view::npos) slash = path.size();
    std::string_view seg = path.substr(i, slash - i);
    trailing = false;
    if (seg == ".") {
      trailing = true;
    } else if (seg == "..") {
      if (!out.empty()) out.pop_back();
      trailing = true;
    } else {
      out.emplace_back(seg);
    }
    i = slash + 1;
  }
  std::string result = absolute ? "/" : "";
  for (size_t k = 0; k < out.size(); ++k) {
    if (k > 0) result += '/';
    result += out[k];
  }
  if (trailing && !out.empty()) result += '/';
  return result;
}

std::string MergePaths(const UrlParts& base, std::string_view ref_path) {
  if (base.authority && base.path.empty()) return "/" + std::string(ref_path);
  const size_t slash = base.path.rfind('/');
  if (slash == std::string::npos) return std::string(ref_path);
  return base.path.substr(0, slash + 1) + std::string(ref_path);
}

}  // namespace

UrlParts SplitUrl(std::string_view url) {
  UrlParts parts;
  size_t i = 0;
  const size_t colon = url.find(':');
  if (colon != std::string_view::npos && colon > 0 &&
      url.find_first_of("/?#") > colon &&
      std::isalpha(static_cast<unsigned char>(url[0]))) {
    parts.scheme = AsciiLower(url.substr(0, colon));
    i = colon + 1;
  }
  if (url.substr(i, 2) == "//") {
    const size_t end = std::min(url.find_first_of("/?#", i + 2), url.size());
    parts.authority = std::string(url.substr(i + 2, end - i - 2));
    i = end;
  }
  const size_t path_end = std::min(url.find_first_of("?#", i), url.size());
  parts.path = std::string(url.substr(i, path_end - i));
  i = path_end;
  if (i < url.size() && url[i] == '?') {
    const size_t q_end = std::min(url.find('#', i), url.size());
    parts.query = std::string(url.substr(i + 1, q_end - i - 1));
    i = q_end;
  }
  if (i < url.size() && url[i] == '#') parts.fragment = std::string(url.substr(i + 1));
  return parts;
}

std::string JoinUrl(const UrlParts& parts) {
  std::string out;
  if (!parts.scheme.empty()) out += parts.scheme + ":";
  if (parts.authority) out += "//" + *parts.authority;
  out += parts.path;
  if (parts.query) out += "?" + *parts.query;
  if (parts.fragment) out += "#" + *parts.fragment;
  return out;
}

std::string ResolveUrl(std::string_view base, std::string_view ref) {
  const std::string trimmed(TrimAscii(ref));
  const UrlParts b = SplitUrl(base);
  const UrlParts r = SplitUrl(trimmed);
  if (b.scheme.empty()) return trimmed;
  UrlParts t;
  if (!r.scheme.empty()) {
    t = r;
    t.path = RemoveDotSegments(r.path);
  } else {
    t.scheme = b.scheme;
    if (r.authority) {
      t.authority = r.authority;
      t.path = RemoveDotSegments(r.path);
      t.query = r.query;
    } else {
      t.authority = b.authority;
      if (r.path.empty()) {
        t.path = b.path;
        t.query = r.query ? r.query : b.query;
      } else {
        t.path = RemoveDotSegments(r.path.front() == '/' ? r.path : MergePaths(b, r.path));
        t.query = r.query;
      }
    }
    t.fragment = r.fragment;
  }
  return JoinUrl(t);
}

std::string UrlHost(std::string_view url) {
  std::string_view host;
  const UrlParts parts = SplitUrl(url);
  if (!parts.authority) return "";
  host = *parts.authority;
  const size_t at = host.rfind('@');
  if (at != std::string_view::npos) host.remove_prefix(at + 1);
  if (!host.empty() && host.front() == '[') {
    const size_t close = host.find(']');
    return AsciiLower(host.substr(0, close == std::string_view::npos ? host.size()
                                                                     : close + 1));
  }
  const size_t colon = host.find(':');
  if (colon != std::string_view::npos) host = host.substr(0, colon);
  return AsciiLower(host);
}

std::string RegistrableDomain(std::string_view url_or_host) {
  std::string host = url_or_host.find("//") != std::string_view::npos
                         ? UrlHost(url_or_host)
                         : AsciiLower(TrimAscii(url_or_host));
  while (!host.empty() && host.back() == '.') host.pop_back();
  if (host.empty() || host.front() == '[') return host;
  if (std::all_of(host.begin(), host.end(),
                  [](char c) { return (c >= '0' && c <= '9') || c == '.'; })) {
    return host;
  }
  std::vector<size_t> dots;
  for (size_t i = 0; i < host.size(); ++i) {
    if (host[i] == '.') dots.push_back(i);
  }
  if (dots.empty()) return host;
  size_t suffix_labels = 1;
  if (dots.size() >= 2) {
    const std::string_view last_two =
        std::string_view(host).substr(dots[dots.size() - 2] + 1);
    if (std::find(kMultiLabelSuffixes.begin(), kMultiLabelSuffixes.end(), last_two) !=
        kMultiLabelSuffixes.end()) {
      suffix_labels = 2;
    }
  }
  if (dots.size() < suffix_labels + 1) return host;
  return host.substr(dots[dots.size() - suffix_labels - 1] + 1);
}

}  // namespace vprex
