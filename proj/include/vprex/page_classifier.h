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

#ifndef VPREX_PAGE_CLASSIFIER_H_
#define VPREX_PAGE_CLASSIFIER_H_

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vprex/gbdt.h"
#include "vprex/gbdt_train.h"
#include "vprex/vpr.h"

namespace vprex {

enum class PageType { kProduct = 0, kSoft404 = 1, kJunk = 2, kOther = 3 };
inline constexpr int kNumPageTypes = 4;

std::string_view PageTypeName(PageType type);  // "PRODUCT", ...
std::optional<PageType> ParsePageType(std::string_view name);

struct PhraseLists {
  std::vector<std::string> cart;
  std::vector<std::string> not_found;

  // Lists compiled in from config/.
  static const PhraseLists& Default();
  // One phrase per line, '#' comments; reads cart_phrases.txt and
  // not_found_phrases.txt from `dir`.
  static PhraseLists Load(const std::string& dir);
  static std::vector<std::string> ParseList(std::string_view text);
};

// True when the tokens of `phrase` occur contiguously in `text`
// (case-insensitive).
bool ContainsPhrase(std::string_view text, std::string_view phrase);

inline constexpr int kTitleHashDims = 1024;

struct PageFeatures {
  double image_text_ratio = 0.0;
  double image_area_share = 0.0;
  int text_element_count = 0;
  int image_element_count = 0;
  int action_element_count = 0;
  double mean_font_size = 0.0;
  double max_font_size = 0.0;
  int price_candidate_count = 0;
  bool has_cart_phrase = false;
  bool has_not_found_phrase = false;
  std::array<double, kTitleHashDims> title_token_hashes{};

  // Flattened in PageFeatureNames() order.
  std::vector<double> ToVector() const;
};

const std::vector<std::string>& PageFeatureNames();

// Bucket of a token in the hashed title features.
int TitleHashBucket(std::string_view token);

PageFeatures FeaturizePage(const VprDocument& doc,
                           const PhraseLists& phrases = PhraseLists::Default());

struct PageClassification {
  PageType type = PageType::kOther;
  std::array<double, kNumPageTypes> scores{};
};

// Argmax over class probabilities, except PRODUCT needs at least
// `product_threshold`; ties go to the earlier class.
PageClassification DecidePageType(const std::array<double, kNumPageTypes>& scores,
                                  double product_threshold);

PageClassification ClassifyPage(const VprDocument& doc, const gbdt::GbdtEnsemble& model,
                                double product_threshold,
                                const PhraseLists& phrases = PhraseLists::Default());

// Precision-targeted cut-off on PRODUCT probabilities.
double TuneProductThreshold(const std::vector<double>& product_scores,
                            const std::vector<PageType>& labels,
                            double target_precision, double min_recall);

gbdt::TrainConfig DefaultPageTrainConfig();

gbdt::GbdtEnsemble TrainPageModel(const std::vector<VprDocument>& docs,
                                  const std::vector<PageType>& labels,
                                  const gbdt::TrainConfig& config = DefaultPageTrainConfig(),
                                  const PhraseLists& phrases = PhraseLists::Default(),
                                  gbdt::Execution execution = gbdt::Execution::kParallel);

}  // namespace vprex

#endif  // VPREX_PAGE_CLASSIFIER_H_
