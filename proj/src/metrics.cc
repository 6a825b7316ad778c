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

#include "vprex/metrics.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <set>

#include "vprex/error.h"
#include "vprex/html.h"
#include "vprex/page_classifier.h"
#include "vprex/price.h"
#include "vprex/render.h"
#include "vprex/text_util.h"

namespace vprex {
namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration<double>(b - a).count();
}

std::optional<double> Ratio(size_t num, size_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

std::string FormatRate(const std::optional<double>& v) {
  if (!v) return "undef";
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%.4f", *v);
  return buf;
}

bool PriceEqual(const std::string& a, const std::string& b) {
  const auto x = Decimal::Parse(a);
  const auto y = Decimal::Parse(b);
  if (!x || !y) return false;
  return *x == *y;
}

}  // namespace

const Normalizers& DefaultNormalizers() {
  static const Normalizers n = {
      {"title",
       [](const std::string& a, const std::string& b) {
         return NormalizeText(a) == NormalizeText(b);
       }},
      {"salePrice", PriceEqual},
      {"listPrice", PriceEqual},
      {"mainImage", [](const std::string& a, const std::string& b) { return a == b; }},
      {"currency", [](const std::string& a, const std::string& b) { return a == b; }},
  };
  return n;
}

bool ValuesMatch(const std::string& attribute, const std::string& predicted,
                 const std::string& label, const Normalizers& normalizers) {
  const auto it = normalizers.find(attribute);
  if (it == normalizers.end()) return predicted == label;
  return it->second(predicted, label);
}

std::optional<double> PrCounts::Precision() const { return Ratio(tp, tp + fp); }
std::optional<double> PrCounts::Recall() const { return Ratio(tp, tp + fn); }

std::string PrReport::ToTable() const {
  std::string out =
      "# FP counts predictions that do not match, including predictions where no label "
      "exists.\n";
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%-12s %6s %6s %6s %6s %10s %10s\n", "attribute", "TP",
                "FP", "FN", "TN", "precision", "recall");
  out += buf;
  const auto row = [&](const std::string& name, const PrCounts& c) {
    std::snprintf(buf, sizeof(buf), "%-12s %6zu %6zu %6zu %6zu %10s %10s\n", name.c_str(),
                  c.tp, c.fp, c.fn, c.tn, FormatRate(c.Precision()).c_str(),
                  FormatRate(c.Recall()).c_str());
    out += buf;
  };
  for (const auto& [name, c] : per_attribute) row(name, c);
  row("overall", overall);
  return out;
}

nlohmann::ordered_json PrReport::ToJson() const {
  const auto counts = [](const PrCounts& c) {
    nlohmann::ordered_json j;
    j["tp"] = c.tp;
    j["fp"] = c.fp;
    j["fn"] = c.fn;
    j["tn"] = c.tn;
    const auto p = c.Precision();
    const auto r = c.Recall();
    j["precision"] = p ? nlohmann::ordered_json(*p) : nlohmann::ordered_json("undefined");
    j["recall"] = r ? nlohmann::ordered_json(*r) : nlohmann::ordered_json("undefined");
    return j;
  };
  nlohmann::ordered_json j;
  j["fpRule"] = "strict: predictions without a label count as FP";
  for (const auto& [name, c] : per_attribute) j["attributes"][name] = counts(c);
  j["overall"] = counts(overall);
  return j;
}

PrReport ComputePr(const std::vector<PredictionRecord>& predictions,
                   const std::vector<LabelRecord>& labels, const Normalizers& normalizers) {
  using Key = std::pair<std::string, std::string>;
  std::map<Key, std::optional<std::string>> pred;
  for (const PredictionRecord& p : predictions) {
    if (!pred.emplace(Key{p.page_id, p.attribute}, p.value).second) {
      throw Error(ErrorCode::kDuplicateKey,
                  "prediction for " + p.page_id + "/" + p.attribute + " repeated");
    }
  }
  std::map<Key, std::optional<std::string>> gold;
  for (const LabelRecord& l : labels) {
    std::optional<std::string> v;
    if (!l.absent) v = l.value;
    if (!gold.emplace(Key{l.page_id, l.attribute}, v).second) {
      throw Error(ErrorCode::kDuplicateKey,
                  "label for " + l.page_id + "/" + l.attribute + " repeated");
    }
  }
  std::set<Key> keys;
  for (const auto& [k, v] : pred) keys.insert(k);
  for (const auto& [k, v] : gold) keys.insert(k);

  PrReport report;
  for (const Key& k : keys) {
    const auto pi = pred.find(k);
    const auto gi = gold.find(k);
    const std::optional<std::string> p = pi == pred.end() ? std::nullopt : pi->second;
    const std::optional<std::string> g = gi == gold.end() ? std::nullopt : gi->second;
    PrCounts& c = report.per_attribute[k.second];
    size_t PrCounts::*slot;
    if (p) {
      slot = g && ValuesMatch(k.second, *p, *g, normalizers) ? &PrCounts::tp : &PrCounts::fp;
    } else {
      slot = g ? &PrCounts::fn : &PrCounts::tn;
    }
    ++(c.*slot);
    ++(report.overall.*slot);
  }
  return report;
}

std::vector<PredictionRecord> ToPredictions(const std::string& page_id,
                                            const ProductMetadata& meta) {
  std::vector<PredictionRecord> out;
  for (AttributeKind kind : {AttributeKind::kTitle, AttributeKind::kMainImage,
                             AttributeKind::kSalePrice, AttributeKind::kListPrice}) {
    const auto& v = meta.Get(kind);
    out.push_back({page_id, std::string(AttributeName(kind)),
                   v ? std::optional<std::string>(v->value) : std::nullopt});
  }
  out.push_back({page_id, "currency", meta.currency});
  return out;
}

nlohmann::ordered_json CostReport::ToJson() const {
  nlohmann::ordered_json j;
  j["pages"] = per_page.size();
  j["medianSeconds"] = median_seconds;
  j["p95Seconds"] = p95_seconds;
  j["pagesPerSecond"] = pages_per_second;
  j["meanVprBytes"] = mean_vpr_bytes;
  j["referenceVprKb"] = 32.26;
  j["stageSeconds"] = {{"render", sum.render},
                       {"featurize", sum.featurize},
                       {"classify", sum.classify},
                       {"total", sum.total}};
  return j;
}

double Percentile(std::vector<double> values, double q) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const size_t lo = static_cast<size_t>(std::floor(pos));
  const size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (values[hi] - values[lo]) * (pos - static_cast<double>(lo));
}

CostReport MeasureCost(const std::vector<CostInput>& pages, const ExtractorModels& models) {
  CostReport report;
  double bytes = 0.0;
  for (const CostInput& page : pages) {
    StageSeconds s;
    const auto t0 = Clock::now();
    const VprDocument doc = GenerateVpr(page.url, page.html);
    const auto t1 = Clock::now();
    s.render = Seconds(t0, t1);

    bool product = true;
    if (models.page) {
      const auto c0 = Clock::now();
      const PageFeatures f = FeaturizePage(doc);
      const auto c1 = Clock::now();
      std::array<double, kNumPageTypes> scores{};
      const std::vector<double> proba = models.page->PredictProba(f.ToVector());
      std::copy(proba.begin(), proba.end(), scores.begin());
      product = DecidePageType(scores, models.thresholds.product).type == PageType::kProduct;
      const auto c2 = Clock::now();
      s.featurize += Seconds(c0, c1);
      s.classify += Seconds(c1, c2);
    }
    if (product) {
      ExtractTimings timings;
      ExtractAll(doc, models, &timings);
      s.featurize += (timings.select_ms + timings.featurize_ms) / 1000.0;
      s.classify += timings.classify_ms / 1000.0;
    }
    s.total = Seconds(t0, Clock::now());
    bytes += static_cast<double>(SerializeVpr(doc).size());
    report.sum.render += s.render;
    report.sum.featurize += s.featurize;
    report.sum.classify += s.classify;
    report.sum.total += s.total;
    report.per_page.push_back(s);
  }
  const double wall = report.sum.total;
  std::vector<double> totals;
  for (const StageSeconds& s : report.per_page) totals.push_back(s.total);
  report.median_seconds = Percentile(totals, 0.5);
  report.p95_seconds = Percentile(totals, 0.95);
  report.pages_per_second = wall > 0.0 ? static_cast<double>(pages.size()) / wall : 0.0;
  report.mean_vpr_bytes = pages.empty() ? 0.0 : bytes / static_cast<double>(pages.size());
  return report;
}

}  // namespace vprex
