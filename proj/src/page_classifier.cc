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

#include "vprex/page_classifier.h"

#include <algorithm>
#include <filesystem>

#include "embedded_config.h"
#include "vprex/error.h"
#include "vprex/price.h"
#include "vprex/text_util.h"
#include "vprex/threshold.h"

namespace vprex {
namespace {

constexpr std::array<std::string_view, kNumPageTypes> kPageTypeNames = {
    "PRODUCT", "SOFT404", "JUNK", "OTHER"};

constexpr int kTopFontTexts = 5;

bool ContainsTokens(const std::vector<std::string>& tokens,
                    const std::vector<std::string>& needle) {
  if (needle.empty() || needle.size() > tokens.size()) return false;
  return std::search(tokens.begin(), tokens.end(), needle.begin(), needle.end()) !=
         tokens.end();
}

bool AnyPhrase(const std::vector<std::vector<std::string>>& texts,
               const std::vector<std::string>& phrases) {
  for (const std::string& phrase : phrases) {
    const std::vector<std::string> needle = Tokenize(phrase);
    for (const auto& tokens : texts) {
      if (ContainsTokens(tokens, needle)) return true;
    }
  }
  return false;
}

}  // namespace

std::string_view PageTypeName(PageType type) {
  return kPageTypeNames[static_cast<int>(type)];
}

std::optional<PageType> ParsePageType(std::string_view name) {
  for (int i = 0; i < kNumPageTypes; ++i) {
    if (kPageTypeNames[i] == name) return static_cast<PageType>(i);
  }
  return std::nullopt;
}

std::vector<std::string> PhraseLists::ParseList(std::string_view text) {
  std::vector<std::string> out;
  for (const std::string& line : SplitLines(text)) {
    std::string_view t = TrimAscii(line);
    if (t.empty() || t.front() == '#') continue;
    out.emplace_back(t);
  }
  return out;
}

const PhraseLists& PhraseLists::Default() {
  static const PhraseLists lists{ParseList(internal::kEmbeddedCartPhrases),
                                 ParseList(internal::kEmbeddedNotFoundPhrases)};
  return lists;
}

PhraseLists PhraseLists::Load(const std::string& dir) {
  const std::filesystem::path base(dir);
  return PhraseLists{ParseList(ReadFile((base / "cart_phrases.txt").string())),
                     ParseList(ReadFile((base / "not_found_phrases.txt").string()))};
}

bool ContainsPhrase(std::string_view text, std::string_view phrase) {
  return ContainsTokens(Tokenize(text), Tokenize(phrase));
}

std::vector<double> PageFeatures::ToVector() const {
  std::vector<double> v = {image_text_ratio,
                           image_area_share,
                           static_cast<double>(text_element_count),
                           static_cast<double>(image_element_count),
                           static_cast<double>(action_element_count),
                           mean_font_size,
                           max_font_size,
                           static_cast<double>(price_candidate_count),
                           has_cart_phrase ? 1.0 : 0.0,
                           has_not_found_phrase ? 1.0 : 0.0};
  v.insert(v.end(), title_token_hashes.begin(), title_token_hashes.end());
  return v;
}

const std::vector<std::string>& PageFeatureNames() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n = {"imageTextRatio",     "imageAreaShare",
                                  "textElementCount",   "imageElementCount",
                                  "actionElementCount", "meanFontSize",
                                  "maxFontSize",        "priceCandidateCount",
                                  "hasCartPhrase",      "hasNotFoundPhrase"};
    for (int i = 0; i < kTitleHashDims; ++i) n.push_back("titleHash" + std::to_string(i));
    return n;
  }();
  return names;
}

int TitleHashBucket(std::string_view token) {
  return static_cast<int>(Fnv1a64(token) % kTitleHashDims);
}

PageFeatures FeaturizePage(const VprDocument& doc, const PhraseLists& phrases) {
  PageFeatures f;
  f.text_element_count = static_cast<int>(doc.text_elements.size());
  f.image_element_count = static_cast<int>(doc.image_elements.size());
  f.action_element_count = static_cast<int>(doc.action_elements.size());
  f.image_text_ratio =
      static_cast<double>(f.image_element_count) / std::max(1, f.text_element_count);

  double image_area = 0.0;
  for (const ImageElement& img : doc.image_elements) {
    image_area += static_cast<double>(img.box.Area());
  }
  const double page_area = static_cast<double>(doc.width) * doc.height;
  f.image_area_share = page_area > 0.0 ? image_area / page_area : 0.0;

  std::vector<std::vector<std::string>> tokenized;
  tokenized.reserve(doc.text_elements.size() + 1);
  tokenized.push_back(Tokenize(doc.title));
  double font_sum = 0.0;
  for (const TextElement& t : doc.text_elements) {
    font_sum += t.font_size;
    f.max_font_size = std::max(f.max_font_size, t.font_size);
    if (FindPrice(t.text)) ++f.price_candidate_count;
    tokenized.push_back(Tokenize(t.text));
  }
  if (!doc.text_elements.empty()) f.mean_font_size = font_sum / doc.text_elements.size();
  f.has_cart_phrase = AnyPhrase(tokenized, phrases.cart);
  f.has_not_found_phrase = AnyPhrase(tokenized, phrases.not_found);

  std::vector<size_t> order(doc.text_elements.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    const TextElement& x = doc.text_elements[a];
    const TextElement& y = doc.text_elements[b];
    if (x.font_size != y.font_size) return x.font_size > y.font_size;
    return x.xpath_id < y.xpath_id;
  });
  for (const std::string& tok : tokenized[0]) {
    f.title_token_hashes[TitleHashBucket(tok)] += 1.0;
  }
  for (size_t k = 0; k < order.size() && k < kTopFontTexts; ++k) {
    for (const std::string& tok : tokenized[order[k] + 1]) {
      f.title_token_hashes[TitleHashBucket(tok)] += 1.0;
    }
  }
  return f;
}

PageClassification DecidePageType(const std::array<double, kNumPageTypes>& scores,
                                  double product_threshold) {
  PageClassification out;
  out.scores = scores;
  int best = -1;
  for (int c = 0; c < kNumPageTypes; ++c) {
    if (c == static_cast<int>(PageType::kProduct) && scores[c] < product_threshold) {
      continue;
    }
    if (best < 0 || scores[c] > scores[best]) best = c;
  }
  out.type = static_cast<PageType>(best);
  return out;
}

PageClassification ClassifyPage(const VprDocument& doc, const gbdt::GbdtEnsemble& model,
                                double product_threshold, const PhraseLists& phrases) {
  const std::vector<double> row = FeaturizePage(doc, phrases).ToVector();
  const std::vector<double> proba = model.PredictProba(row);
  if (proba.size() != kNumPageTypes) {
    throw Error(ErrorCode::kDimensionMismatch, "page model must have 4 classes");
  }
  std::array<double, kNumPageTypes> scores{};
  std::copy(proba.begin(), proba.end(), scores.begin());
  return DecidePageType(scores, product_threshold);
}

double TuneProductThreshold(const std::vector<double>& product_scores,
                            const std::vector<PageType>& labels,
                            double target_precision, double min_recall) {
  std::vector<int> binary(labels.size());
  for (size_t i = 0; i < labels.size(); ++i) binary[i] = labels[i] == PageType::kProduct;
  return TunePrecisionThreshold(product_scores, binary, target_precision, min_recall);
}

gbdt::TrainConfig DefaultPageTrainConfig() {
  gbdt::TrainConfig config;
  config.objective = gbdt::Objective::kSoftmax;
  config.num_classes = kNumPageTypes;
  config.rounds = 40;
  config.max_depth = 3;
  config.learning_rate = 0.2;
  config.min_child_hessian = 10.0;
  return config;
}

gbdt::GbdtEnsemble TrainPageModel(const std::vector<VprDocument>& docs,
                                  const std::vector<PageType>& labels,
                                  const gbdt::TrainConfig& config,
                                  const PhraseLists& phrases, gbdt::Execution execution) {
  if (docs.size() != labels.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "docs and labels differ in length");
  }
  gbdt::FeatureMatrix x(0, PageFeatureNames().size());
  std::vector<int> y;
  for (size_t i = 0; i < docs.size(); ++i) {
    x.AppendRow(FeaturizePage(docs[i], phrases).ToVector());
    y.push_back(static_cast<int>(labels[i]));
  }
  return gbdt::Train(x, y, config, PageFeatureNames(), execution);
}

}  // namespace vprex
