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

#ifndef VPREX_TEXT_UTIL_H_
#define VPREX_TEXT_UTIL_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace vprex {

void AppendUtf8(std::string& out, char32_t cp);

// Number of Unicode scalar values; invalid bytes count as one each.
size_t Utf8Length(std::string_view s);

std::string AsciiLower(std::string_view s);
std::string_view TrimAscii(std::string_view s);

bool IsAsciiSpace(char c);

// 64-bit FNV-1a.
uint64_t Fnv1a64(std::string_view s);

// Lowercased tokens split on ASCII non-alphanumerics. Bytes >= 0x80 are kept
// inside tokens except U+00A0, which separates.
std::vector<std::string> Tokenize(std::string_view s);

// Lowercase + whitespace collapse, used when comparing free text.
std::string NormalizeText(std::string_view s);

std::vector<std::string> SplitLines(std::string_view s);

std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, std::string_view contents);

}  // namespace vprex

#endif  // VPREX_TEXT_UTIL_H_
