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

#ifndef VPREX_RENDER_H_
#define VPREX_RENDER_H_

#include <string>
#include <string_view>

#include "vprex/style.h"
#include "vprex/vpr.h"

namespace vprex {

// Static-HTML renderer: parse, style, lay out, then emit one TextElement per
// element owning visible text (its runs merged), one ImageElement per img
// with a source and one ActionElement per a/button with a box. Pure and
// deterministic in (url, html, viewport_width).
VprDocument GenerateVpr(std::string_view url, std::string_view html,
                        int viewport_width = kDefaultViewportWidth);

// Same, over an already parsed DOM.
VprDocument GenerateVpr(std::string_view url, const DomNode& dom,
                        int viewport_width = kDefaultViewportWidth);

// True for loading="lazy" or data-src without src.
bool IsLazyImage(const DomNode& img);

// src attribute, falling back to data-src; empty if neither is set.
std::string ImageSource(const DomNode& img);

}  // namespace vprex

#endif  // VPREX_RENDER_H_
