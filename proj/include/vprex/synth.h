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

#ifndef VPREX_SYNTH_H_
#define VPREX_SYNTH_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vprex/extract.h"
#include "vprex/html.h"
#include "vprex/page_classifier.h"
#include "vprex/vpr.h"

namespace vprex {

// Small deterministic generator; distributions are computed here rather than
// with <random> adaptors so that a seed yields the same corpus everywhere.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}
  uint64_t Next();
  // Uniform in [0, n).
  uint64_t Below(uint64_t n);
  int Range(int lo, int hi);  // inclusive
  double Uniform();           // [0, 1)
  bool Chance(double p) { return Uniform() < p; }
  template <typename T>
  const T& Pick(const std::vector<T>& v) {
    return v[Below(v.size())];
  }

 private:
  uint64_t state_;
};

struct PageTypeMix {
  double product = 1.0;
  double soft404 = 0.0;
  double junk = 0.0;
  double other = 0.0;
  // Sparse product-like pages whose label is PRODUCT with probability
  // `gray_product_share` and SOFT404 otherwise.
  double gray = 0.0;
  double gray_product_share = 0.55;
};

struct SynthConfig {
  int num_domains = 40;
  int pages_per_domain = 10;
  int template_families = 24;
  double dynamic_price_fraction = 0.0;
  double list_price_fraction = 0.6;
  PageTypeMix mix;
  uint64_t seed = 7;
};

struct SyntheticTruth {
  std::optional<std::string> title;
  std::optional<std::string> main_image;  // absolute URL
  std::optional<std::string> sale_price;  // canonical decimal
  std::optional<std::string> list_price;
  std::optional<std::string> currency;

  friend bool operator==(const SyntheticTruth&, const SyntheticTruth&) = default;
};

struct SyntheticPage {
  std::string page_id;
  std::string domain;
  std::string url;
  int family = 0;
  bool dynamic_prices = false;
  bool in_stock = true;
  bool gray = false;
  PageType type = PageType::kProduct;
  std::string html;           // as served; prices may sit in a script
  std::string rendered_html;  // after scripts ran
  SyntheticTruth truth;
};

// Throws kBadConfig for fewer than 2 families, non-positive sizes or
// fractions outside [0, 1].
std::vector<SyntheticPage> GenerateSyntheticCorpus(const SynthConfig& config);

// Ground truth recovered from the data-gt markers of a page.
SyntheticTruth ParseGroundTruth(const DomNode& dom, const std::string& url);

// Maps the data-gt markers onto xpath ids of the page's VPR.
PageLabels GroundTruthLabels(const DomNode& dom, const VprDocument& doc);

// Formats an amount the way a page in `iso` would display it.
std::string FormatPrice(int64_t cents, const std::string& iso);

}  // namespace vprex

#endif  // VPREX_SYNTH_H_
