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

#ifndef VPREX_METRICS_H_
#define VPREX_METRICS_H_

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "vprex/dataset.h"
#include "vprex/extract.h"

namespace vprex {

// One extractor output; an empty `value` means nothing was extracted.
struct PredictionRecord {
  std::string page_id;
  std::string attribute;
  std::optional<std::string> value;
};

// Match rule per attribute name: true when a predicted value equals a label.
using ValueMatcher = std::function<bool(const std::string&, const std::string&)>;
using Normalizers = std::map<std::string, ValueMatcher>;

// Title: lowercase + whitespace collapse. Prices: exact decimal equality.
// Main image: URL string equality. Currency: ISO code equality. Anything
// else: exact string equality.
const Normalizers& DefaultNormalizers();
bool ValuesMatch(const std::string& attribute, const std::string& predicted,
                 const std::string& label, const Normalizers& normalizers);

struct PrCounts {
  size_t tp = 0;
  size_t fp = 0;
  size_t fn = 0;
  size_t tn = 0;
  // nullopt for 0/0.
  std::optional<double> Precision() const;
  std::optional<double> Recall() const;
};

struct PrReport {
  std::map<std::string, PrCounts> per_attribute;
  PrCounts overall;

  // Human-readable table, one row per attribute.
  std::string ToTable() const;
  nlohmann::ordered_json ToJson() const;
};

// Keys are (pageId, attribute). A non-empty prediction is TP when it
// matches the label, otherwise FP (including when no label exists); an empty
// prediction is FN when a label exists and TN otherwise. Labels marked
// absent count as no label. Throws kDuplicateKey on repeated keys.
PrReport ComputePr(const std::vector<PredictionRecord>& predictions,
                   const std::vector<LabelRecord>& labels,
                   const Normalizers& normalizers = DefaultNormalizers());

// Prediction records for the five product attributes of one page.
std::vector<PredictionRecord> ToPredictions(const std::string& page_id,
                                            const ProductMetadata& meta);

struct CostInput {
  std::string url;
  std::string html;
};

struct StageSeconds {
  double render = 0.0;
  double featurize = 0.0;  // candidate selection + featurization
  double classify = 0.0;   // page type + candidate models
  double total = 0.0;
};

struct CostReport {
  std::vector<StageSeconds> per_page;
  double median_seconds = 0.0;
  double p95_seconds = 0.0;
  double pages_per_second = 0.0;
  double mean_vpr_bytes = 0.0;
  StageSeconds sum;

  nlohmann::ordered_json ToJson() const;
};

// Single-threaded render -> classify -> extract over `pages`, timing each
// stage. The page classifier runs when `models.page` is present.
CostReport MeasureCost(const std::vector<CostInput>& pages, const ExtractorModels& models);

double Percentile(std::vector<double> values, double q);

}  // namespace vprex

#endif  // VPREX_METRICS_H_
