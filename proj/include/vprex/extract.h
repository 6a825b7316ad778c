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

#ifndef VPREX_EXTRACT_H_
#define VPREX_EXTRACT_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "vprex/gbdt.h"
#include "vprex/gbdt_train.h"
#include "vprex/page_classifier.h"
#include "vprex/price.h"
#include "vprex/vpr.h"

namespace vprex {

enum class AttributeKind { kTitle, kMainImage, kSalePrice, kListPrice, kCurrency };

// "title", "mainImage", "salePrice", "listPrice", "currency".
std::string_view AttributeName(AttributeKind kind);
std::optional<AttributeKind> ParseAttributeName(std::string_view name);

// One classifier per model kind; sale and list price share the price model.
enum class ModelKind { kTitle, kMainImage, kPrice };

// Price model classes.
enum class PriceClass { kNone = 0, kSale = 1, kList = 2 };

inline constexpr int kTitleCandidateCap = 512;
inline constexpr int kAboveFoldPx = 1000;

struct PriceCandidate {
  int element = 0;  // index into VprDocument::text_elements
  Decimal value;
  std::string currency_hint;
  std::string raw_text;
};

std::vector<PriceCandidate> SelectPriceCandidates(const VprDocument& doc,
                                                  const CurrencyTable& table =
                                                      CurrencyTable::Default());
// Indices into text_elements, in document order.
std::vector<int> SelectTitleCandidates(const VprDocument& doc);
// Indices into image_elements with positive area, in document order.
std::vector<int> SelectImageCandidates(const VprDocument& doc);

const std::vector<std::string>& CandidateFeatureNames(ModelKind kind);

// One row per candidate, columns in CandidateFeatureNames order. Missing
// values are gbdt::kMissing.
gbdt::FeatureMatrix FeaturizeTitleCandidates(const VprDocument& doc,
                                             const std::vector<int>& candidates);
gbdt::FeatureMatrix FeaturizeImageCandidates(const VprDocument& doc,
                                             const std::vector<int>& candidates);
gbdt::FeatureMatrix FeaturizePriceCandidates(const VprDocument& doc,
                                             const std::vector<PriceCandidate>& candidates);

// Ascending rank with ties sharing the smaller rank; missing stays missing.
std::vector<double> MinRanks(const std::vector<double>& values);

// Intervals [a0, a0+alen) and [b0, b0+blen) overlap by at least half the
// smaller length.
bool HalfOverlap(double a0, double alen, double b0, double blen);

struct CandidateDecision {
  std::optional<int> winner;  // candidate row
  double score = 0.0;
};

// Argmax with the lowest xpath id on ties; empty when the best score is below
// `threshold`.
CandidateDecision DecideBinary(const std::vector<double>& scores,
                               const std::vector<int>& xpath_ids, double threshold);

struct PriceDecision {
  CandidateDecision sale;
  CandidateDecision list;
};

// `proba` holds per-candidate {NONE, SALE, LIST} probabilities. When both
// classes pick the same candidate the more probable class keeps it and the
// other falls back to its next best candidate above threshold.
PriceDecision DecidePrices(const std::vector<std::vector<double>>& proba,
                           const std::vector<int>& xpath_ids, double sale_threshold,
                           double list_threshold);

struct AttributeThresholds {
  double product = 0.0;
  double title = 0.5;
  double main_image = 0.5;
  double sale_price = 0.5;
  double list_price = 0.5;

  nlohmann::json ToJson() const;
  static AttributeThresholds FromJson(const nlohmann::json& j);
};

struct ExtractorModels {
  std::optional<gbdt::GbdtEnsemble> page;
  gbdt::GbdtEnsemble title;
  gbdt::GbdtEnsemble main_image;
  gbdt::GbdtEnsemble price;
  AttributeThresholds thresholds;

  // page.model.json (optional), title.model.json, main_image.model.json,
  // price.model.json and thresholds.json.
  static ExtractorModels Load(const std::string& dir);
  void Save(const std::string& dir) const;
  // Throws kSchemaMismatch when a model's features differ from the catalog.
  void CheckSchemas() const;
};

struct AttributeValue {
  int xpath_id = 0;
  std::string value;
  double score = 0.0;

  friend bool operator==(const AttributeValue&, const AttributeValue&) = default;
};

struct ProductMetadata {
  std::optional<AttributeValue> title;
  std::optional<AttributeValue> main_image;
  std::optional<AttributeValue> sale_price;
  std::optional<AttributeValue> list_price;
  std::optional<std::string> currency;
  std::vector<std::string> errors;  // per-attribute failures

  const std::optional<AttributeValue>& Get(AttributeKind kind) const;
  friend bool operator==(const ProductMetadata&, const ProductMetadata&) = default;
};

struct ExtractTimings {
  double select_ms = 0.0;
  double featurize_ms = 0.0;
  double classify_ms = 0.0;
};

ProductMetadata ExtractAll(const VprDocument& doc, const ExtractorModels& models,
                           ExtractTimings* timings = nullptr);

// {url, pageType, attributes: {title, mainImage, salePrice, listPrice, currency}}.
nlohmann::ordered_json ExtractionToJson(const VprDocument& doc, const ProductMetadata& meta,
                                        std::optional<PageType> page_type);

// Ground truth for one page, as xpath ids into its VPR.
struct PageLabels {
  std::optional<int> title;
  std::optional<int> main_image;
  std::optional<int> sale_price;
  std::optional<int> list_price;

  std::optional<int> Get(AttributeKind kind) const;
};

struct CandidateDataset {
  gbdt::FeatureMatrix features;
  std::vector<int> labels;
};

CandidateDataset BuildCandidateDataset(ModelKind kind, const std::vector<VprDocument>& docs,
                                       const std::vector<PageLabels>& labels);

gbdt::TrainConfig DefaultCandidateTrainConfig(ModelKind kind);

gbdt::GbdtEnsemble TrainCandidateModel(
    ModelKind kind, const std::vector<VprDocument>& docs,
    const std::vector<PageLabels>& labels,
    const gbdt::TrainConfig& config,
    gbdt::Execution execution = gbdt::Execution::kParallel);

// Page-level (best score, winner correct) pairs for threshold tuning; pages
// without a ground-truth element contribute label 0.
struct ValidationScores {
  std::vector<double> scores;
  std::vector<int> correct;
};

ValidationScores CollectValidationScores(AttributeKind kind,
                                         const std::vector<VprDocument>& docs,
                                         const std::vector<PageLabels>& labels,
                                         const ExtractorModels& models);

// Tunes the four attribute thresholds in place.
void TuneAttributeThresholds(ExtractorModels& models, const std::vector<VprDocument>& docs,
                             const std::vector<PageLabels>& labels, double target_precision,
                             double min_recall = 0.0);

}  // namespace vprex

#endif  // VPREX_EXTRACT_H_
