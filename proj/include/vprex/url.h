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

#ifndef VPREX_URL_H_
#define VPREX_URL_H_

#include <optional>
#include <string>
#include <string_view>

namespace vprex {

struct UrlParts {
  std::string scheme;  // lowercase, without ':'
  std::optional<std::string> authority;
  std::string path;
  std::optional<std::string> query;
  std::optional<std::string> fragment;
};

UrlParts SplitUrl(std::string_view url);
std::string JoinUrl(const UrlParts& parts);

// Reference resolution against an absolute base (dot segments removed).
// Returns `ref` unchanged when the base is not absolute.
std::string ResolveUrl(std::string_view base, std::string_view ref);

// Lowercased host without port or userinfo; empty when absent.
std::string UrlHost(std::string_view url);

// eTLD+1 using a small built-in suffix list ("shop.example.co.uk" ->
// "example.co.uk"). IP literals and single labels are returned as is.
std::string RegistrableDomain(std::string_view url_or_host);

}  // namespace vprex

#endif  // VPREX_URL_H_
