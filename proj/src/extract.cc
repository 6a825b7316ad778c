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

#include "vprex/extract.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <set>
#include <unordered_map>

#include "vprex/error.h"
#include "vprex/text_util.h"
#include "vprex/threshold.h"
#include "vprex/url.h"

namespace vprex {

using gbdt::FeatureMatrix;
using gbdt::kMissing;

namespace {

constexpr std::string_view kAttributeNames[] = {"title", "mainImage", "salePrice",
                                                "listPrice", "currency"};

const std::vector<std::string> kSharedNames = {
    "x",
    "y",
    "widthPx",
    "heightPx",
    "area",
    "xNorm",
    "yNorm",
    "aboveFold",
    "distToLargestImage",
    "distToLargestText",
    "sameRowCandidates",
    "sameColumnCandidates",
    "widthRank",
    "heightRank",
    "areaRank",
    "distToLargestImageRank",
    "distToLargestTextRank",
};
const std::vector<std::string> kStyleNames = {"fontSize", "lineThrough", "fontSizeRank",
                                              "isMaxFontSize"};
const std::vector<std::string> kTitleNames = {"sameTextCount", "docTitleTokenOverlap",
                                              "textLength", "tokenCount"};
const std::vector<std::string> kImageNames = {"lazyLoaded",   "clickable",
                                              "aspectRatio",  "isLargestImage",
                                              "areaShareOfViewport", "sizeUnknown"};
const std::vector<std::string> kPriceNames = {"numericValue", "priceValueRank",
                                              "samePriceCount", "hasCurrencySymbol",
                                              "distToNearestOtherPrice"};

double Distance(const BoundingBox& a, const BoundingBox& b) {
  return std::hypot(a.CenterX() - b.CenterX(), a.CenterY() - b.CenterY());
}

// Largest image by area, lowest xpath id on ties; -1 when none has area.
int LargestImage(const VprDocument& doc) {
  int best = -1;
  for (size_t i = 0; i < doc.image_elements.size(); ++i) {
    const ImageElement& img = doc.image_elements[i];
    if (img.box.Area() <= 0) continue;
    if (best < 0 || img.box.Area() > doc.image_elements[best].box.Area()) {
      best = static_cast<int>(i);
    }
  }
  return best;
}

// Text elements ordered by font size, then area, descending; xpath id
// ascending on ties. Only the first two are needed.
std::vector<int> LargestTexts(const VprDocument& doc) {
  std::vector<int> order;
  for (size_t i = 0; i < doc.text_elements.size(); ++i) order.push_back(static_cast<int>(i));
  const auto larger = [&](int a, int b) {
    const TextElement& x = doc.text_elements[a];
    const TextElement& y = doc.text_elements[b];
    if (x.font_size != y.font_size) return x.font_size > y.font_size;
    if (x.box.Area() != y.box.Area()) return x.box.Area() > y.box.Area();
    return x.xpath_id < y.xpath_id;
  };
  const size_t k = std::min<size_t>(2, order.size());
  std::partial_sort(order.begin(), order.begin() + k, order.end(), larger);
  order.resize(k);
  return order;
}

struct SharedInput {
  BoundingBox box;
  int text_index = -1;  // set when the candidate is a text element
};

// Writes the shared layout block into columns [0, kSharedNames.size()).
void FillShared(const VprDocument& doc, const std::vector<SharedInput>& cands,
                FeatureMatrix& m) {
  const size_t n = cands.size();
  const int largest_image = LargestImage(doc);
  const std::vector<int> largest_texts = LargestTexts(doc);
  std::vector<double> widths(n), heights(n), areas(n), dimg(n), dtext(n);
  for (size_t r = 0; r < n; ++r) {
    const BoundingBox& b = cands[r].box;
    widths[r] = b.width;
    heights[r] = b.height;
    areas[r] = static_cast<double>(b.Area());
    dimg[r] = largest_image < 0 ? kMissing
                                : Distance(b, doc.image_elements[largest_image].box);
    dtext[r] = kMissing;
    for (int t : largest_texts) {
      if (t == cands[r].text_index) continue;
      dtext[r] = Distance(b, doc.text_elements[t].box);
      break;
    }
  }
  const std::vector<double> width_rank = MinRanks(widths);
  const std::vector<double> height_rank = MinRanks(heights);
  const std::vector<double> area_rank = MinRanks(areas);
  const std::vector<double> dimg_rank = MinRanks(dimg);
  const std::vector<double> dtext_rank = MinRanks(dtext);
  for (size_t r = 0; r < n; ++r) {
    const BoundingBox& b = cands[r].box;
    int same_row = 0;
    int same_col = 0;
    for (size_t o = 0; o < n; ++o) {
      if (o == r) continue;
      const BoundingBox& c = cands[o].box;
      same_row += HalfOverlap(b.y, b.height, c.y, c.height);
      same_col += HalfOverlap(b.x, b.width, c.x, c.width);
    }
    const double row[] = {
        static_cast<double>(b.x),
        static_cast<double>(b.y),
        widths[r],
        heights[r],
        areas[r],
        doc.width > 0 ? b.x / static_cast<double>(doc.width) : kMissing,
        doc.height > 0 ? b.y / static_cast<double>(doc.height) : kMissing,
        b.y < kAboveFoldPx ? 1.0 : 0.0,
        dimg[r],
        dtext[r],
        static_cast<double>(same_row),
        static_cast<double>(same_col),
        width_rank[r],
        height_rank[r],
        area_rank[r],
        dimg_rank[r],
        dtext_rank[r],
    };
    for (size_t c = 0; c < kSharedNames.size(); ++c) m.at(r, c) = row[c];
  }
}

// Style block for text candidates, starting at column `col`.
void FillStyle(const VprDocument& doc, const std::vector<int>& text_indices,
               FeatureMatrix& m, size_t col) {
  double max_font = 0.0;
  for (const TextElement& t : doc.text_elements) max_font = std::max(max_font, t.font_size);
  std::vector<double> fonts;
  for (int i : text_indices) fonts.push_back(doc.text_elements[i].font_size);
  const std::vector<double> font_rank = MinRanks(fonts);
  for (size_t r = 0; r < text_indices.size(); ++r) {
    const TextElement& t = doc.text_elements[text_indices[r]];
    m.at(r, col) = t.font_size;
    m.at(r, col + 1) = t.line_through ? 1.0 : 0.0;
    m.at(r, col + 2) = font_rank[r];
    m.at(r, col + 3) = t.font_size == max_font ? 1.0 : 0.0;
  }
}

double Jaccard(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  const std::set<std::string> sa(a.begin(), a.end());
  const std::set<std::string> sb(b.begin(), b.end());
  if (sa.empty() && sb.empty()) return 0.0;
  size_t inter = 0;
  for (const std::string& t : sa) inter += sb.count(t);
  return static_cast<double>(inter) / (sa.size() + sb.size() - inter);
}

double MsSince(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                   start)
      .count();
}

std::vector<std::vector<double>> PredictRows(const gbdt::GbdtEnsemble& model,
                                             const FeatureMatrix& m) {
  std::vector<std::vector<double>> out;
  out.reserve(m.rows());
  for (size_t r = 0; r < m.rows(); ++r) out.push_back(model.PredictProba(m.Row(r)));
  return out;
}

std::vector<double> Column(const std::vector<std::vector<double>>& proba, int c) {
  std::vector<double> out;
  out.reserve(proba.size());
  for (const auto& p : proba) out.push_back(p[c]);
  return out;
}

CandidateDecision DecideExcluding(const std::vector<double>& scores,
                                  const std::vector<int>& xpath_ids, double threshold,
                                  int excluded) {
  CandidateDecision d;
  int best = -1;
  for (size_t i = 0; i < scores.size(); ++i) {
    if (static_cast<int>(i) == excluded) continue;
    if (best < 0 || scores[i] > scores[best] ||
        (scores[i] == scores[best] && xpath_ids[i] < xpath_ids[best])) {
      best = static_cast<int>(i);
    }
  }
  if (best >= 0 && scores[best] >= threshold) {
    d.winner = best;
    d.score = scores[best];
  }
  return d;
}

std::vector<int> TextXpathIds(const VprDocument& doc, const std::vector<int>& idx) {
  std::vector<int> ids;
  for (int i : idx) ids.push_back(doc.text_elements[i].xpath_id);
  return ids;
}

std::vector<int> PriceXpathIds(const VprDocument& doc,
                               const std::vector<PriceCandidate>& cands) {
  std::vector<int> ids;
  for (const PriceCandidate& c : cands) ids.push_back(doc.text_elements[c.element].xpath_id);
  return ids;
}

std::vector<int> ImageXpathIds(const VprDocument& doc, const std::vector<int>& idx) {
  std::vector<int> ids;
  for (int i : idx) ids.push_back(doc.image_elements[i].xpath_id);
  return ids;
}

nlohmann::ordered_json AttributeJson(const std::optional<AttributeValue>& v) {
  if (!v) return nullptr;
  nlohmann::ordered_json j;
  j["xpathId"] = v->xpath_id;
  j["value"] = v->value;
  j["score"] = v->score;
  return j;
}

}  // namespace

std::string_view AttributeName(AttributeKind kind) {
  return kAttributeNames[static_cast<int>(kind)];
}

std::optional<AttributeKind> ParseAttributeName(std::string_view name) {
  for (int i = 0; i < 5; ++i) {
    if (kAttributeNames[i] == name) return static_cast<AttributeKind>(i);
  }
  return std::nullopt;
}

std::vector<PriceCandidate> SelectPriceCandidates(const VprDocument& doc,
                                                  const CurrencyTable& table) {
  std::vector<PriceCandidate> out;
  for (size_t i = 0; i < doc.text_elements.size(); ++i) {
    const std::string& text = doc.text_elements[i].text;
    auto m = FindPrice(text, table);
    if (!m) continue;
    out.push_back({static_cast<int>(i), m->value, m->currency_hint, text});
  }
  return out;
}

std::vector<int> SelectTitleCandidates(const VprDocument& doc) {
  std::vector<int> idx;
  for (size_t i = 0; i < doc.text_elements.size(); ++i) idx.push_back(static_cast<int>(i));
  if (idx.size() > static_cast<size_t>(kTitleCandidateCap)) {
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
      const TextElement& x = doc.text_elements[a];
      const TextElement& y = doc.text_elements[b];
      if (x.font_size != y.font_size) return x.font_size > y.font_size;
      return x.xpath_id < y.xpath_id;
    });
    idx.resize(kTitleCandidateCap);
    std::sort(idx.begin(), idx.end());
  }
  return idx;
}

std::vector<int> SelectImageCandidates(const VprDocument& doc) {
  std::vector<int> idx;
  for (size_t i = 0; i < doc.image_elements.size(); ++i) {
    if (doc.image_elements[i].box.Area() > 0) idx.push_back(static_cast<int>(i));
  }
  return idx;
}

const std::vector<std::string>& CandidateFeatureNames(ModelKind kind) {
  static const auto build = [](std::initializer_list<const std::vector<std::string>*> parts) {
    std::vector<std::string> out;
    for (const auto* p : parts) out.insert(out.end(), p->begin(), p->end());
    return out;
  };
  static const std::vector<std::string> title =
      build({&kSharedNames, &kStyleNames, &kTitleNames});
  static const std::vector<std::string> image = build({&kSharedNames, &kImageNames});
  static const std::vector<std::string> price =
      build({&kSharedNames, &kStyleNames, &kPriceNames});
  switch (kind) {
    case ModelKind::kTitle:
      return title;
    case ModelKind::kMainImage:
      return image;
    case ModelKind::kPrice:
      break;
  }
  return price;
}

std::vector<double> MinRanks(const std::vector<double>& values) {
  std::vector<double> present;
  for (double v : values) {
    if (!gbdt::IsMissing(v)) present.push_back(v);
  }
  std::sort(present.begin(), present.end());
  std::vector<double> ranks(values.size(), kMissing);
  for (size_t i = 0; i < values.size(); ++i) {
    if (gbdt::IsMissing(values[i])) continue;
    ranks[i] = 1.0 + static_cast<double>(std::lower_bound(present.begin(), present.end(),
                                                          values[i]) -
                                         present.begin());
  }
  return ranks;
}

bool HalfOverlap(double a0, double alen, double b0, double blen) {
  const double smaller = std::min(alen, blen);
  if (smaller <= 0.0) {
    // A degenerate interval counts when its point lies inside the other.
    const double p = alen <= 0.0 ? a0 : b0;
    const double s = alen <= 0.0 ? b0 : a0;
    const double len = alen <= 0.0 ? blen : alen;
    return p >= s && p <= s + std::max(0.0, len);
  }
  const double overlap = std::min(a0 + alen, b0 + blen) - std::max(a0, b0);
  return overlap >= 0.5 * smaller;
}

FeatureMatrix FeaturizeTitleCandidates(const VprDocument& doc,
                                       const std::vector<int>& candidates) {
  const auto& names = CandidateFeatureNames(ModelKind::kTitle);
  FeatureMatrix m(candidates.size(), names.size());
  std::vector<SharedInput> shared;
  for (int i : candidates) shared.push_back({doc.text_elements[i].box, i});
  FillShared(doc, shared, m);
  FillStyle(doc, candidates, m, kSharedNames.size());

  std::unordered_map<std::string, int> text_counts;
  std::vector<std::string> normalized(doc.text_elements.size());
  for (size_t i = 0; i < doc.text_elements.size(); ++i) {
    normalized[i] = NormalizeText(doc.text_elements[i].text);
    ++text_counts[normalized[i]];
  }
  const std::vector<std::string> title_tokens = Tokenize(doc.title);
  const size_t col = kSharedNames.size() + kStyleNames.size();
  for (size_t r = 0; r < candidates.size(); ++r) {
    const TextElement& t = doc.text_elements[candidates[r]];
    const std::vector<std::string> tokens = Tokenize(t.text);
    m.at(r, col) = text_counts[normalized[candidates[r]]] - 1;
    m.at(r, col + 1) = Jaccard(tokens, title_tokens);
    m.at(r, col + 2) = static_cast<double>(Utf8Length(t.text));
    m.at(r, col + 3) = static_cast<double>(tokens.size());
  }
  return m;
}

FeatureMatrix FeaturizeImageCandidates(const VprDocument& doc,
                                       const std::vector<int>& candidates) {
  const auto& names = CandidateFeatureNames(ModelKind::kMainImage);
  FeatureMatrix m(candidates.size(), names.size());
  std::vector<SharedInput> shared;
  for (int i : candidates) shared.push_back({doc.image_elements[i].box, -1});
  FillShared(doc, shared, m);

  const int largest = LargestImage(doc);
  const double viewport = static_cast<double>(doc.width) * kAboveFoldPx;
  const size_t col = kSharedNames.size();
  for (size_t r = 0; r < candidates.size(); ++r) {
    const ImageElement& img = doc.image_elements[candidates[r]];
    bool clickable = false;
    for (const ActionElement& a : doc.action_elements) {
      if (a.box.Contains(img.box.CenterX(), img.box.CenterY())) {
        clickable = true;
        break;
      }
    }
    m.at(r, col) = img.lazy ? 1.0 : 0.0;
    m.at(r, col + 1) = clickable ? 1.0 : 0.0;
    m.at(r, col + 2) =
        img.box.height > 0 ? static_cast<double>(img.box.width) / img.box.height : kMissing;
    m.at(r, col + 3) = candidates[r] == largest ? 1.0 : 0.0;
    m.at(r, col + 4) =
        viewport > 0.0 ? static_cast<double>(img.box.Area()) / viewport : kMissing;
    m.at(r, col + 5) = img.size_unknown ? 1.0 : 0.0;
  }
  return m;
}

FeatureMatrix FeaturizePriceCandidates(const VprDocument& doc,
                                       const std::vector<PriceCandidate>& candidates) {
  const auto& names = CandidateFeatureNames(ModelKind::kPrice);
  FeatureMatrix m(candidates.size(), names.size());
  std::vector<SharedInput> shared;
  std::vector<int> text_indices;
  for (const PriceCandidate& c : candidates) {
    shared.push_back({doc.text_elements[c.element].box, c.element});
    text_indices.push_back(c.element);
  }
  FillShared(doc, shared, m);
  FillStyle(doc, text_indices, m, kSharedNames.size());

  std::vector<double> negated;
  for (const PriceCandidate& c : candidates) negated.push_back(-c.value.ToDouble());
  const std::vector<double> value_rank = MinRanks(negated);
  const size_t col = kSharedNames.size() + kStyleNames.size();
  for (size_t r = 0; r < candidates.size(); ++r) {
    const PriceCandidate& c = candidates[r];
    int same = 0;
    double nearest = kMissing;
    const BoundingBox& box = doc.text_elements[c.element].box;
    for (size_t o = 0; o < candidates.size(); ++o) {
      if (o == r) continue;
      if (candidates[o].value == c.value) ++same;
      const double d = Distance(box, doc.text_elements[candidates[o].element].box);
      if (gbdt::IsMissing(nearest) || d < nearest) nearest = d;
    }
    bool symbol = false;
    for (const CurrencyEntry& e : CurrencyTable::Default().entries()) {
      if (e.token == c.currency_hint) {
        symbol = e.kind != CurrencyEntry::Kind::kCode;
        break;
      }
    }
    m.at(r, col) = c.value.ToDouble();
    m.at(r, col + 1) = value_rank[r];
    m.at(r, col + 2) = same;
    m.at(r, col + 3) = symbol ? 1.0 : 0.0;
    m.at(r, col + 4) = nearest;
  }
  return m;
}

CandidateDecision DecideBinary(const std::vector<double>& scores,
                               const std::vector<int>& xpath_ids, double threshold) {
  return DecideExcluding(scores, xpath_ids, threshold, -1);
}

PriceDecision DecidePrices(const std::vector<std::vector<double>>& proba,
                           const std::vector<int>& xpath_ids, double sale_threshold,
                           double list_threshold) {
  const std::vector<double> sale = Column(proba, static_cast<int>(PriceClass::kSale));
  const std::vector<double> list = Column(proba, static_cast<int>(PriceClass::kList));
  PriceDecision d;
  d.sale = DecideBinary(sale, xpath_ids, sale_threshold);
  d.list = DecideBinary(list, xpath_ids, list_threshold);
  if (d.sale.winner && d.list.winner && *d.sale.winner == *d.list.winner) {
    const int shared = *d.sale.winner;
    if (sale[shared] >= list[shared]) {
      d.list = DecideExcluding(list, xpath_ids, list_threshold, shared);
    } else {
      d.sale = DecideExcluding(sale, xpath_ids, sale_threshold, shared);
    }
  }
  return d;
}

nlohmann::json AttributeThresholds::ToJson() const {
  nlohmann::ordered_json j;
  j["product"] = product;
  j["title"] = title;
  j["mainImage"] = main_image;
  j["salePrice"] = sale_price;
  j["listPrice"] = list_price;
  return nlohmann::json::parse(j.dump());
}

AttributeThresholds AttributeThresholds::FromJson(const nlohmann::json& j) {
  AttributeThresholds t;
  try {
    t.product = j.value("product", t.product);
    t.title = j.value("title", t.title);
    t.main_image = j.value("mainImage", t.main_image);
    t.sale_price = j.value("salePrice", t.sale_price);
    t.list_price = j.value("listPrice", t.list_price);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedModel, std::string("thresholds: ") + e.what());
  }
  return t;
}

ExtractorModels ExtractorModels::Load(const std::string& dir) {
  const std::filesystem::path base(dir);
  ExtractorModels m;
  if (std::filesystem::exists(base / "page.model.json")) {
    m.page = gbdt::LoadModel(ReadFile((base / "page.model.json").string()));
  }
  m.title = gbdt::LoadModel(ReadFile((base / "title.model.json").string()));
  m.main_image = gbdt::LoadModel(ReadFile((base / "main_image.model.json").string()));
  m.price = gbdt::LoadModel(ReadFile((base / "price.model.json").string()));
  const std::string thresholds = ReadFile((base / "thresholds.json").string());
  try {
    m.thresholds = AttributeThresholds::FromJson(nlohmann::json::parse(thresholds));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kMalformedJson, std::string("thresholds.json: ") + e.what());
  }
  m.CheckSchemas();
  return m;
}

void ExtractorModels::Save(const std::string& dir) const {
  const std::filesystem::path base(dir);
  std::filesystem::create_directories(base);
  if (page) WriteFile((base / "page.model.json").string(), gbdt::SaveModel(*page));
  WriteFile((base / "title.model.json").string(), gbdt::SaveModel(title));
  WriteFile((base / "main_image.model.json").string(), gbdt::SaveModel(main_image));
  WriteFile((base / "price.model.json").string(), gbdt::SaveModel(price));
  WriteFile((base / "thresholds.json").string(), thresholds.ToJson().dump(2) + "\n");
}

void ExtractorModels::CheckSchemas() const {
  if (page) gbdt::CheckFeatureSchema(*page, PageFeatureNames());
  gbdt::CheckFeatureSchema(title, CandidateFeatureNames(ModelKind::kTitle));
  gbdt::CheckFeatureSchema(main_image, CandidateFeatureNames(ModelKind::kMainImage));
  gbdt::CheckFeatureSchema(price, CandidateFeatureNames(ModelKind::kPrice));
  if (price.objective != gbdt::Objective::kSoftmax || price.num_classes != 3) {
    throw Error(ErrorCode::kSchemaMismatch, "price model must be 3-class softmax");
  }
}

const std::optional<AttributeValue>& ProductMetadata::Get(AttributeKind kind) const {
  switch (kind) {
    case AttributeKind::kTitle:
      return title;
    case AttributeKind::kMainImage:
      return main_image;
    case AttributeKind::kSalePrice:
      return sale_price;
    case AttributeKind::kListPrice:
    case AttributeKind::kCurrency:
      break;
  }
  return list_price;
}

ProductMetadata ExtractAll(const VprDocument& doc, const ExtractorModels& models,
                           ExtractTimings* timings) {
  ProductMetadata meta;
  ExtractTimings local;
  const auto guard = [&](AttributeKind kind, const std::function<void()>& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      meta.errors.push_back(std::string(AttributeName(kind)) + ": " + e.what());
    }
  };

  guard(AttributeKind::kTitle, [&] {
    auto t0 = std::chrono::steady_clock::now();
    const std::vector<int> cands = SelectTitleCandidates(doc);
    local.select_ms += MsSince(t0);
    t0 = std::chrono::steady_clock::now();
    const FeatureMatrix m = FeaturizeTitleCandidates(doc, cands);
    local.featurize_ms += MsSince(t0);
    t0 = std::chrono::steady_clock::now();
    const std::vector<double> scores = Column(PredictRows(models.title, m), 1);
    const CandidateDecision d =
        DecideBinary(scores, TextXpathIds(doc, cands), models.thresholds.title);
    local.classify_ms += MsSince(t0);
    if (d.winner) {
      const TextElement& t = doc.text_elements[cands[*d.winner]];
      meta.title = AttributeValue{t.xpath_id, t.text, d.score};
    }
  });

  guard(AttributeKind::kMainImage, [&] {
    auto t0 = std::chrono::steady_clock::now();
    const std::vector<int> cands = SelectImageCandidates(doc);
    local.select_ms += MsSince(t0);
    t0 = std::chrono::steady_clock::now();
    const FeatureMatrix m = FeaturizeImageCandidates(doc, cands);
    local.featurize_ms += MsSince(t0);
    t0 = std::chrono::steady_clock::now();
    const std::vector<double> scores = Column(PredictRows(models.main_image, m), 1);
    const CandidateDecision d =
        DecideBinary(scores, ImageXpathIds(doc, cands), models.thresholds.main_image);
    local.classify_ms += MsSince(t0);
    if (d.winner) {
      const ImageElement& img = doc.image_elements[cands[*d.winner]];
      meta.main_image = AttributeValue{img.xpath_id, ResolveUrl(doc.url, img.src), d.score};
    }
  });

  std::optional<std::string> sale_text;
  std::optional<std::string> list_text;
  guard(AttributeKind::kSalePrice, [&] {
    auto t0 = std::chrono::steady_clock::now();
    const std::vector<PriceCandidate> cands = SelectPriceCandidates(doc);
    local.select_ms += MsSince(t0);
    t0 = std::chrono::steady_clock::now();
    const FeatureMatrix m = FeaturizePriceCandidates(doc, cands);
    local.featurize_ms += MsSince(t0);
    t0 = std::chrono::steady_clock::now();
    const PriceDecision d =
        DecidePrices(PredictRows(models.price, m), PriceXpathIds(doc, cands),
                     models.thresholds.sale_price, models.thresholds.list_price);
    local.classify_ms += MsSince(t0);
    const auto value_of = [&](const CandidateDecision& cd) {
      const PriceCandidate& c = cands[*cd.winner];
      return AttributeValue{doc.text_elements[c.element].xpath_id, c.value.ToString(),
                            cd.score};
    };
    if (d.sale.winner) {
      meta.sale_price = value_of(d.sale);
      sale_text = cands[*d.sale.winner].raw_text;
    }
    if (d.list.winner) {
      meta.list_price = value_of(d.list);
      list_text = cands[*d.list.winner].raw_text;
    }
  });

  meta.currency = ResolveCurrency(sale_text, list_text);
  if (timings != nullptr) *timings = local;
  return meta;
}

nlohmann::ordered_json ExtractionToJson(const VprDocument& doc, const ProductMetadata& meta,
                                std::optional<PageType> page_type) {
  nlohmann::ordered_json attrs;
  attrs["title"] = AttributeJson(meta.title);
  attrs["mainImage"] = AttributeJson(meta.main_image);
  attrs["salePrice"] = AttributeJson(meta.sale_price);
  attrs["listPrice"] = AttributeJson(meta.list_price);
  attrs["currency"] = meta.currency ? nlohmann::ordered_json(*meta.currency) : nullptr;
  nlohmann::ordered_json out;
  out["url"] = doc.url;
  out["pageType"] = page_type ? nlohmann::ordered_json(std::string(PageTypeName(*page_type)))
                              : nlohmann::ordered_json(nullptr);
  out["attributes"] = attrs;
  if (!meta.errors.empty()) out["errors"] = meta.errors;
  return out;
}

std::optional<int> PageLabels::Get(AttributeKind kind) const {
  switch (kind) {
    case AttributeKind::kTitle:
      return title;
    case AttributeKind::kMainImage:
      return main_image;
    case AttributeKind::kSalePrice:
      return sale_price;
    case AttributeKind::kListPrice:
      return list_price;
    case AttributeKind::kCurrency:
      break;
  }
  return std::nullopt;
}

CandidateDataset BuildCandidateDataset(ModelKind kind, const std::vector<VprDocument>& docs,
                                       const std::vector<PageLabels>& labels) {
  if (docs.size() != labels.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "docs and labels differ in length");
  }
  CandidateDataset data;
  data.features = FeatureMatrix(0, CandidateFeatureNames(kind).size());
  for (size_t p = 0; p < docs.size(); ++p) {
    const VprDocument& doc = docs[p];
    const PageLabels& gt = labels[p];
    FeatureMatrix m;
    std::vector<int> ids;
    if (kind == ModelKind::kTitle) {
      const std::vector<int> cands = SelectTitleCandidates(doc);
      m = FeaturizeTitleCandidates(doc, cands);
      ids = TextXpathIds(doc, cands);
      for (int id : ids) data.labels.push_back(gt.title == id);
    } else if (kind == ModelKind::kMainImage) {
      const std::vector<int> cands = SelectImageCandidates(doc);
      m = FeaturizeImageCandidates(doc, cands);
      ids = ImageXpathIds(doc, cands);
      for (int id : ids) data.labels.push_back(gt.main_image == id);
    } else {
      const std::vector<PriceCandidate> cands = SelectPriceCandidates(doc);
      m = FeaturizePriceCandidates(doc, cands);
      ids = PriceXpathIds(doc, cands);
      for (int id : ids) {
        int c = static_cast<int>(PriceClass::kNone);
        if (gt.sale_price == id) {
          c = static_cast<int>(PriceClass::kSale);
        } else if (gt.list_price == id) {
          c = static_cast<int>(PriceClass::kList);
        }
        data.labels.push_back(c);
      }
    }
    for (size_t r = 0; r < m.rows(); ++r) data.features.AppendRow(m.Row(r));
  }
  return data;
}

gbdt::TrainConfig DefaultCandidateTrainConfig(ModelKind kind) {
  gbdt::TrainConfig config;
  config.rounds = 80;
  config.max_depth = 5;
  config.learning_rate = 0.2;
  if (kind == ModelKind::kPrice) {
    config.objective = gbdt::Objective::kSoftmax;
    config.num_classes = 3;
  }
  return config;
}

gbdt::GbdtEnsemble TrainCandidateModel(ModelKind kind, const std::vector<VprDocument>& docs,
                                       const std::vector<PageLabels>& labels,
                                       const gbdt::TrainConfig& config,
                                       gbdt::Execution execution) {
  const CandidateDataset data = BuildCandidateDataset(kind, docs, labels);
  return gbdt::Train(data.features, data.labels, config, CandidateFeatureNames(kind),
                     execution);
}

ValidationScores CollectValidationScores(AttributeKind kind,
                                         const std::vector<VprDocument>& docs,
                                         const std::vector<PageLabels>& labels,
                                         const ExtractorModels& models) {
  if (docs.size() != labels.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "docs and labels differ in length");
  }
  ExtractorModels open = models;
  open.thresholds.title = open.thresholds.main_image = 0.0;
  open.thresholds.sale_price = open.thresholds.list_price = 0.0;
  ValidationScores out;
  for (size_t p = 0; p < docs.size(); ++p) {
    const ProductMetadata meta = ExtractAll(docs[p], open);
    const std::optional<AttributeValue>& v = meta.Get(kind);
    if (!v) continue;
    out.scores.push_back(v->score);
    out.correct.push_back(labels[p].Get(kind) == v->xpath_id);
  }
  return out;
}

void TuneAttributeThresholds(ExtractorModels& models, const std::vector<VprDocument>& docs,
                             const std::vector<PageLabels>& labels, double target_precision,
                             double min_recall) {
  const struct {
    AttributeKind kind;
    double* slot;
  } targets[] = {{AttributeKind::kTitle, &models.thresholds.title},
                 {AttributeKind::kMainImage, &models.thresholds.main_image},
                 {AttributeKind::kSalePrice, &models.thresholds.sale_price},
                 {AttributeKind::kListPrice, &models.thresholds.list_price}};
  for (const auto& t : targets) {
    const ValidationScores v = CollectValidationScores(t.kind, docs, labels, models);
    if (v.scores.empty()) continue;
    *t.slot = TunePrecisionThreshold(v.scores, v.correct, target_precision, min_recall);
  }
}

}  // namespace vprex
