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

#ifndef VPREX_WI_H_
#define VPREX_WI_H_

#include <array>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "vprex/dataset.h"
#include "vprex/extract.h"
#include "vprex/html.h"
#include "vprex/vpr.h"

namespace vprex {

// Attributes a wrapper model scores directly; currency is derived.
inline constexpr std::array<AttributeKind, 4> kWiAttributes = {
    AttributeKind::kTitle, AttributeKind::kMainImage, AttributeKind::kSalePrice,
    AttributeKind::kListPrice};

inline constexpr int kWiTokenDims = 256;
inline constexpr int kWiPathDims = 1024;
// id tokens | class tokens | tag path | stripped xpath | dense block
inline constexpr int kWiDenseOffset = 2 * kWiTokenDims + 2 * kWiPathDims;
inline constexpr int kWiDenseDims = 5;
inline constexpr int kWiDims = kWiDenseOffset + kWiDenseDims;

struct HtmlNodeFeatures {
  uint64_t tag_path_hash = 0;
  uint64_t stripped_xpath_hash = 0;
  std::vector<int> id_tokens;     // buckets in [0, kWiTokenDims)
  std::vector<int> class_tokens;  // buckets in [0, kWiTokenDims)
  int depth = 0;
  bool text_looks_like_price = false;
  int text_length = 0;
  int position_among_siblings = 0;  // 1-based among element siblings
  bool is_image = false;

  // Sparse (index, value) pairs in [0, kWiDims).
  std::vector<std::pair<int, double>> ToSparse() const;
};

HtmlNodeFeatures ComputeNodeFeatures(const DomNode& node);

// "/html/body/div/h1" for a node at /html[1]/body[1]/div[3]/h1[1].
std::string StrippedXpath(const DomNode& node);

// Element nodes in body that own text, or img nodes for the main image;
// script/style subtrees are skipped. Price attributes keep only nodes whose
// own text matches the price grammar.
std::vector<const DomNode*> WiCandidates(const DomNode& dom, AttributeKind kind);

// Result of mapping one page's VPR extraction onto its static HTML.
struct MappedLabels {
  // Per attribute: the accepted node, or nullopt when the prediction was
  // empty (`predicted` false) or could not be found (`predicted` true).
  std::map<AttributeKind, const DomNode*> nodes;
  std::map<AttributeKind, bool> predicted;
  int accepted = 0;
  int dropped = 0;
};

// Resolves each predicted element's XPath in `static_dom` and keeps it only
// when the node's text (or image URL) yields the predicted value.
MappedLabels MapPredictionToHtmlNode(const ProductMetadata& prediction,
                                     const VprDocument& doc, const DomNode& static_dom);

struct WiAttributeModel {
  bool trained = false;
  std::vector<double> weights;  // kWiDims
  double bias = 0.0;
  double threshold = 0.5;
};

struct WiModel {
  std::string domain;
  std::map<AttributeKind, WiAttributeModel> attributes;
  int trained_on_pages = 0;
  double agreement_rate = 0.0;

  nlohmann::ordered_json ToJson() const;
  static WiModel FromJson(const nlohmann::json& j);
};

struct WiTrainingPage {
  const DomNode* dom = nullptr;
  MappedLabels labels;
};

struct WiTrainConfig {
  int epochs = 200;
  double step = 0.1;
  double l2 = 1e-4;
  double threshold = 0.5;
  int min_pages = 10;
};

// Per attribute, a logistic scorer over node features fit by full-batch
// gradient descent on a class-balanced loss. Pages whose label for an
// attribute was dropped are skipped for that attribute. Throws
// kInsufficientPages below `config.min_pages`.
WiModel TrainWiModel(const std::string& domain, const std::vector<WiTrainingPage>& pages,
                     const WiTrainConfig& config = {});

double WiScore(const WiAttributeModel& model, const HtmlNodeFeatures& features);

// Throws kDomainMismatch when `url` is not on the model's domain. Emitted
// attributes carry xpath_id -1 since no VPR is involved.
ProductMetadata WiExtract(const WiModel& model, const DomNode& static_dom,
                          const std::string& url);

struct AgreementStats {
  int holdout_pages = 0;
  std::map<std::string, double> per_attribute;  // by AttributeName
  double overall = 0.0;

  nlohmann::ordered_json ToJson() const;
};

// Fraction of pages where the two outputs match under the evaluation match
// rules (both empty counts as agreement). Throws kEmptyHoldout.
AgreementStats EvaluateAgreement(const std::vector<ProductMetadata>& vpr_outputs,
                                 const std::vector<ProductMetadata>& wi_outputs);

enum class RouteMode { kVpr, kWi };
std::string_view RouteModeName(RouteMode mode);

struct GateConfig {
  int min_holdout = 20;
  double min_agreement = 0.95;
};

struct DomainRoute {
  std::string domain;
  RouteMode mode = RouteMode::kVpr;
  std::string promoted_at;
  AgreementStats gate_stats;

  nlohmann::ordered_json ToJson() const;
  static DomainRoute FromJson(const nlohmann::json& j);
};

// WI iff the holdout is large enough and every attribute agrees enough.
DomainRoute PromoteDomain(const std::string& domain, const AgreementStats& stats,
                          const GateConfig& config = {},
                          const std::string& timestamp = UtcTimestamp());

// JSON-lines registry; the latest line for a domain wins. Appends are
// serialized; reads see a consistent snapshot.
class RouteRegistry {
 public:
  explicit RouteRegistry(std::string path = "");

  void Append(const DomainRoute& route);
  std::optional<DomainRoute> Lookup(const std::string& domain) const;
  RouteMode ModeFor(const std::string& domain) const;
  std::vector<DomainRoute> Current() const;  // sorted by domain

 private:
  std::string path_;
  mutable std::mutex mu_;
  std::map<std::string, DomainRoute> latest_;
};

struct DistillPage {
  std::string page_id;
  std::string url;
  std::string static_html;
  std::string rendered_html;
};

struct DistillResult {
  WiModel model;
  AgreementStats stats;
  DomainRoute route;
  int labels_accepted = 0;
  int labels_dropped = 0;
  std::vector<LabelRecord> labels;  // provenance-tagged distilled labels

  double AcceptanceRate() const {
    const int total = labels_accepted + labels_dropped;
    return total == 0 ? 0.0 : static_cast<double>(labels_accepted) / total;
  }
};

// Labels the first `train_pages` pages with the VPR extractors, trains the
// wrapper model and measures agreement on the rest.
DistillResult DistillDomain(const std::string& domain, const std::vector<DistillPage>& pages,
                            const ExtractorModels& models, int train_pages,
                            const WiTrainConfig& train_config = {},
                            const GateConfig& gate = {});

}  // namespace vprex

#endif  // VPREX_WI_H_
