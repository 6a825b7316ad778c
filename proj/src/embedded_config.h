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

#ifndef VPREX_SRC_EMBEDDED_CONFIG_H_
#define VPREX_SRC_EMBEDDED_CONFIG_H_

#include <string_view>

namespace vprex::internal {

extern const std::string_view kEmbeddedCurrencies;
extern const std::string_view kEmbeddedCartPhrases;
extern const std::string_view kEmbeddedNotFoundPhrases;

}  // namespace vprex::internal

#endif  // VPREX_SRC_EMBEDDED_CONFIG_H_
