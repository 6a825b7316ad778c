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

#include "vprex/wi.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>

#include "vprex/error.h"
#include "vprex/metrics.h"
#include "vprex/price.h"
#include "vprex/render.h"
#include "vprex/text_util.h"
#include "vprex/url.h"

namespace vprex {
namespace {

constexpr int kTagPathLevels = 4;

bool SkippedSubtree(const DomNode& node) {
  return node.tag == "script" || node.tag == "style" || node.tag == "noscript" ||
         node.tag == "template" || node.tag == "head";
}

std::string FirstClass(const DomNode& node) {
  const std::string* cls = node.Attr("class");
  if (cls == nullptr) return "";
  const std::string_view t = TrimAscii(*cls);
  return std::string(t.substr(0, t.find(' ')));
}

void Collect(const DomNode& node, AttributeKind kind, std::vector<const DomNode*>& out) {
  if (!node.is_element() || SkippedSubtree(node)) return;
  if (kind == AttributeKind::kMainImage) {
    if (node.tag == "img" && !ImageSource(node).empty()) out.push_back(&node);
  } else {
    const std::string text = OwnText(node);
    if (!text.empty()) {
      const bool is_price =
          kind == AttributeKind::kSalePrice || kind == AttributeKind::kListPrice;
      if (!is_price || FindPrice(text)) out.push_back(&node);
    }
  }
  for (const auto& child : node.children) Collect(*child, kind, out);
}

double Sigmoid(double z) {
  return z >= 0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

std::string NodeValue(const DomNode& node, AttributeKind kind, const std::string& url) {
  if (kind == AttributeKind::kMainImage) return ResolveUrl(url, ImageSource(node));
  const std::string text = OwnText(node);
  if (kind == AttributeKind::kTitle) return text;
  const auto m = FindPrice(text);
  return m ? m->value.ToString() : "";
}

bool SameOutput(const std::optional<std::string>& a, const std::optional<std::string>& b,
                const std::string& attribute) {
  if (!a || !b) return a.has_value() == b.has_value();
  return ValuesMatch(attribute, *a, *b, DefaultNormalizers());
}

std::optional<std::string> ValueOf(const ProductMetadata& meta, AttributeKind kind) {
  if (kind == AttributeKind::kCurrency) return meta.currency;
  const auto& v = meta.Get(kind);
  return v ? std::optional<std::string>(v->value) : std::nullopt;
}

struct Scored {
  const DomNode* node;
  double score;
};

std::optional<size_t> BestIndex(const std::vector<Scored>& s, double threshold,
                                const DomNode* excluded) {
  std::optional<size_t> best;
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i].node == excluded) continue;
    if (!best || s[i].score > s[*best].score) best = i;
  }
  if (best && s[*best].score < threshold) best.reset();
  return best;
}

}  // namespace

std::vector<std::pair<int, double>> HtmlNodeFeatures::ToSparse() const {
  std::vector<std::pair<int, double>> out;
  for (int b : id_tokens) out.emplace_back(b, 1.0);
  for (int b : class_tokens) out.emplace_back(kWiTokenDims + b, 1.0);
  out.emplace_back(2 * kWiTokenDims + static_cast<int>(tag_path_hash % kWiPathDims), 1.0);
  out.emplace_back(2 * kWiTokenDims + kWiPathDims +
                       static_cast<int>(stripped_xpath_hash % kWiPathDims),
                   1.0);
  out.emplace_back(kWiDenseOffset, depth / 10.0);
  out.emplace_back(kWiDenseOffset + 1, text_looks_like_price ? 1.0 : 0.0);
  out.emplace_back(kWiDenseOffset + 2, std::log1p(static_cast<double>(text_length)) / 5.0);
  out.emplace_back(kWiDenseOffset + 3, std::min(position_among_siblings, 50) / 10.0);
  out.emplace_back(kWiDenseOffset + 4, is_image ? 1.0 : 0.0);
  return out;
}

std::string StrippedXpath(const DomNode& node) {
  std::vector<const DomNode*> chain;
  for (const DomNode* n = &node; n != nullptr && n->is_element(); n = n->parent) {
    chain.push_back(n);
  }
  std::string out;
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) out += "/" + (*it)->tag;
  return out;
}

HtmlNodeFeatures ComputeNodeFeatures(const DomNode& node) {
  HtmlNodeFeatures f;
  std::string tag_path;
  int level = 0;
  for (const DomNode* n = &node; n != nullptr && n->is_element(); n = n->parent) {
    if (level < kTagPathLevels) {
      const std::string cls = FirstClass(*n);
      tag_path = n->tag + (cls.empty() ? "" : "." + cls) + (tag_path.empty() ? "" : ">") +
                 tag_path;
    }
    ++level;
  }
  f.depth = level - 1;
  f.tag_path_hash = Fnv1a64(tag_path);
  f.stripped_xpath_hash = Fnv1a64(StrippedXpath(node));
  if (const std::string* id = node.Attr("id")) {
    for (const std::string& t : Tokenize(*id)) {
      f.id_tokens.push_back(static_cast<int>(Fnv1a64(t) % kWiTokenDims));
    }
  }
  if (const std::string* cls = node.Attr("class")) {
    for (const std::string& t : Tokenize(*cls)) {
      f.class_tokens.push_back(static_cast<int>(Fnv1a64(t) % kWiTokenDims));
    }
  }
  const std::string text = OwnText(node);
  f.text_looks_like_price = FindPrice(text).has_value();
  f.text_length = static_cast<int>(Utf8Length(text));
  f.is_image = node.tag == "img";
  if (node.parent != nullptr) {
    int pos = 0;
    for (const auto& sib : node.parent->children) {
      if (!sib->is_element()) continue;
      ++pos;
      if (sib.get() == &node) break;
    }
    f.position_among_siblings = pos;
  }
  return f;
}

std::vector<const DomNode*> WiCandidates(const DomNode& dom, AttributeKind kind) {
  std::vector<const DomNode*> out;
  const DomNode* body = Body(dom);
  if (body != nullptr) Collect(*body, kind, out);
  return out;
}

MappedLabels MapPredictionToHtmlNode(const ProductMetadata& prediction,
                                     const VprDocument& doc, const DomNode& static_dom) {
  MappedLabels out;
  for (AttributeKind kind : kWiAttributes) {
    const auto& v = prediction.Get(kind);
    out.predicted[kind] = v.has_value();
    if (!v) continue;
    const DomNode* node = nullptr;
    try {
      node = ResolveXpath(static_dom, XpathString(doc, v->xpath_id));
    } catch (const Error&) {
      node = nullptr;
    }
    bool ok = false;
    if (node != nullptr) {
      if (kind == AttributeKind::kMainImage) {
        ok = node->tag == "img" && NodeValue(*node, kind, doc.url) == v->value;
      } else if (kind == AttributeKind::kTitle) {
        ok = NormalizeText(OwnText(*node)) == NormalizeText(v->value);
      } else {
        ok = NodeValue(*node, kind, doc.url) == v->value;
      }
    }
    if (ok) {
      out.nodes[kind] = node;
      ++out.accepted;
    } else {
      ++out.dropped;
    }
  }
  return out;
}

nlohmann::ordered_json WiModel::ToJson() const {
  nlohmann::ordered_json j;
  j["version"] = "1";
  j["domain"] = domain;
  j["trainedOnPages"] = trained_on_pages;
  j["agreementRate"] = agreement_rate;
  j["dims"] = kWiDims;
  nlohmann::ordered_json attrs = nlohmann::ordered_json::object();
  for (const auto& [kind, m] : attributes) {
    nlohmann::ordered_json a;
    a["trained"] = m.trained;
    a["bias"] = m.bias;
    a["threshold"] = m.threshold;
    // Sparse weights keep the file small.
    nlohmann::ordered_json w = nlohmann::ordered_json::array();
    for (size_t i = 0; i < m.weights.size(); ++i) {
      if (m.weights[i] != 0.0) w.push_back({i, m.weights[i]});
    }
    a["weights"] = w;
    attrs[std::string(AttributeName(kind))] = a;
  }
  j["attributes"] = attrs;
  return j;
}

WiModel WiModel::FromJson(const nlohmann::json& j) {
  WiModel m;
  try {
    if (j.at("version").get<std::string>() != "1") {
      throw Error(ErrorCode::kUnsupportedVersion, "wrapper model version");
    }
    if (j.at("dims").get<int>() != kWiDims) {
      throw Error(ErrorCode::kSchemaMismatch, "wrapper feature width differs");
    }
    m.domain = j.at("domain").get<std::string>();
    m.trained_on_pages = j.at("trainedOnPages").get<int>();
    m.agreement_rate = j.at("agreementRate").get<double>();
    for (const auto& [name, a] : j.at("attributes").items()) {
      const auto kind = ParseAttributeName(name);
      if (!kind) throw Error(ErrorCode::kMalformedModel, "unknown attribute " + name);
      WiAttributeModel am;
      am.trained = a.at("trained").get<bool>();
      am.bias = a.at("bias").get<double>();
      am.threshold = a.at("threshold").get<double>();
      am.weights.assign(kWiDims, 0.0);
      for (const auto& pair : a.at("weights")) {
        const size_t i = pair.at(0).get<size_t>();
        if (i >= am.weights.size()) throw Error(ErrorCode::kMalformedModel, "weight index");
        am.weights[i] = pair.at(1).get<double>();
      }
      m.attributes[*kind] = std::move(am);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedModel, e.what());
  }
  return m;
}

double WiScore(const WiAttributeModel& model, const HtmlNodeFeatures& features) {
  double z = model.bias;
  for (const auto& [i, v] : features.ToSparse()) z += model.weights[i] * v;
  return Sigmoid(z);
}

WiModel TrainWiModel(const std::string& domain, const std::vector<WiTrainingPage>& pages,
                     const WiTrainConfig& config) {
  if (static_cast<int>(pages.size()) < config.min_pages) {
    throw Error(ErrorCode::kInsufficientPages,
                domain + " has " + std::to_string(pages.size()) + " labeled pages, need " +
                    std::to_string(config.min_pages));
  }
  WiModel model;
  model.domain = domain;
  model.trained_on_pages = static_cast<int>(pages.size());
  for (AttributeKind kind : kWiAttributes) {
    std::vector<std::vector<std::pair<int, double>>> rows;
    std::vector<int> y;
    for (const WiTrainingPage& page : pages) {
      const auto pred = page.labels.predicted.find(kind);
      const bool predicted = pred != page.labels.predicted.end() && pred->second;
      const auto node = page.labels.nodes.find(kind);
      const DomNode* positive = node == page.labels.nodes.end() ? nullptr : node->second;
      if (predicted && positive == nullptr) continue;  // dropped label
      for (const DomNode* c : WiCandidates(*page.dom, kind)) {
        rows.push_back(ComputeNodeFeatures(*c).ToSparse());
        y.push_back(c == positive);
      }
    }
    WiAttributeModel am;
    am.threshold = config.threshold;
    am.weights.assign(kWiDims, 0.0);
    const size_t n = rows.size();
    const size_t n_pos = static_cast<size_t>(std::count(y.begin(), y.end(), 1));
    if (n_pos == 0 || n_pos == n) {
      model.attributes[kind] = am;
      continue;
    }
    const double w_pos = static_cast<double>(n) / (2.0 * n_pos);
    const double w_neg = static_cast<double>(n) / (2.0 * (n - n_pos));
    std::vector<double> grad(kWiDims);
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
      std::fill(grad.begin(), grad.end(), 0.0);
      double grad_bias = 0.0;
      for (size_t r = 0; r < n; ++r) {
        double z = am.bias;
        for (const auto& [i, v] : rows[r]) z += am.weights[i] * v;
        const double err = (Sigmoid(z) - y[r]) * (y[r] ? w_pos : w_neg) / n;
        for (const auto& [i, v] : rows[r]) grad[i] += err * v;
        grad_bias += err;
      }
      for (int i = 0; i < kWiDims; ++i) {
        am.weights[i] -= config.step * (grad[i] + config.l2 * am.weights[i]);
      }
      am.bias -= config.step * grad_bias;
    }
    am.trained = true;
    model.attributes[kind] = std::move(am);
  }
  return model;
}

ProductMetadata WiExtract(const WiModel& model, const DomNode& static_dom,
                          const std::string& url) {
  if (RegistrableDomain(url) != model.domain) {
    throw Error(ErrorCode::kDomainMismatch,
                url + " is not on " + model.domain);
  }
  ProductMetadata meta;
  std::map<AttributeKind, std::vector<Scored>> scored;
  for (AttributeKind kind : kWiAttributes) {
    const auto it = model.attributes.find(kind);
    if (it == model.attributes.end() || !it->second.trained) continue;
    std::vector<Scored>& s = scored[kind];
    for (const DomNode* c : WiCandidates(static_dom, kind)) {
      s.push_back({c, WiScore(it->second, ComputeNodeFeatures(*c))});
    }
  }
  const auto threshold = [&](AttributeKind kind) {
    return model.attributes.at(kind).threshold;
  };
  std::map<AttributeKind, std::optional<size_t>> pick;
  for (const auto& [kind, s] : scored) pick[kind] = BestIndex(s, threshold(kind), nullptr);

  const AttributeKind sale = AttributeKind::kSalePrice;
  const AttributeKind list = AttributeKind::kListPrice;
  if (pick[sale] && pick[list] &&
      scored[sale][*pick[sale]].node == scored[list][*pick[list]].node) {
    const DomNode* shared = scored[sale][*pick[sale]].node;
    if (scored[sale][*pick[sale]].score >= scored[list][*pick[list]].score) {
      pick[list] = BestIndex(scored[list], threshold(list), shared);
    } else {
      pick[sale] = BestIndex(scored[sale], threshold(sale), shared);
    }
  }

  std::optional<std::string> sale_text;
  std::optional<std::string> list_text;
  for (const auto& [kind, idx] : pick) {
    if (!idx) continue;
    const Scored& s = scored[kind][*idx];
    AttributeValue v{-1, NodeValue(*s.node, kind, url), s.score};
    switch (kind) {
      case AttributeKind::kTitle:
        meta.title = v;
        break;
      case AttributeKind::kMainImage:
        meta.main_image = v;
        break;
      case AttributeKind::kSalePrice:
        meta.sale_price = v;
        sale_text = OwnText(*s.node);
        break;
      case AttributeKind::kListPrice:
        meta.list_price = v;
        list_text = OwnText(*s.node);
        break;
      case AttributeKind::kCurrency:
        break;
    }
  }
  meta.currency = ResolveCurrency(sale_text, list_text);
  return meta;
}

nlohmann::ordered_json AgreementStats::ToJson() const {
  nlohmann::ordered_json j;
  j["holdoutPages"] = holdout_pages;
  nlohmann::ordered_json a = nlohmann::ordered_json::object();
  for (const auto& [name, rate] : per_attribute) a[name] = rate;
  j["agreement"] = a;
  j["overall"] = overall;
  return j;
}

AgreementStats EvaluateAgreement(const std::vector<ProductMetadata>& vpr_outputs,
                                 const std::vector<ProductMetadata>& wi_outputs) {
  if (vpr_outputs.empty()) throw Error(ErrorCode::kEmptyHoldout, "no holdout pages");
  if (vpr_outputs.size() != wi_outputs.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "output lists differ in length");
  }
  AgreementStats stats;
  stats.holdout_pages = static_cast<int>(vpr_outputs.size());
  const AttributeKind kinds[] = {AttributeKind::kTitle, AttributeKind::kMainImage,
                                 AttributeKind::kSalePrice, AttributeKind::kListPrice,
                                 AttributeKind::kCurrency};
  size_t agree_all = 0;
  for (AttributeKind kind : kinds) {
    const std::string name(AttributeName(kind));
    size_t agree = 0;
    for (size_t i = 0; i < vpr_outputs.size(); ++i) {
      agree += SameOutput(ValueOf(vpr_outputs[i], kind), ValueOf(wi_outputs[i], kind), name);
    }
    agree_all += agree;
    stats.per_attribute[name] = static_cast<double>(agree) / vpr_outputs.size();
  }
  stats.overall = static_cast<double>(agree_all) / (vpr_outputs.size() * std::size(kinds));
  return stats;
}

std::string_view RouteModeName(RouteMode mode) { return mode == RouteMode::kWi ? "WI" : "VPR"; }

nlohmann::ordered_json DomainRoute::ToJson() const {
  nlohmann::ordered_json j;
  j["domain"] = domain;
  j["mode"] = RouteModeName(mode);
  j["promotedAt"] = promoted_at;
  j["gateStats"] = gate_stats.ToJson();
  return j;
}

DomainRoute DomainRoute::FromJson(const nlohmann::json& j) {
  DomainRoute r;
  try {
    r.domain = j.at("domain").get<std::string>();
    const std::string mode = j.at("mode").get<std::string>();
    if (mode != "WI" && mode != "VPR") {
      throw Error(ErrorCode::kSchemaViolation, "unknown route mode " + mode);
    }
    r.mode = mode == "WI" ? RouteMode::kWi : RouteMode::kVpr;
    r.promoted_at = j.value("promotedAt", "");
    if (j.contains("gateStats")) {
      const auto& g = j.at("gateStats");
      r.gate_stats.holdout_pages = g.value("holdoutPages", 0);
      r.gate_stats.overall = g.value("overall", 0.0);
      if (g.contains("agreement")) {
        for (const auto& [name, v] : g.at("agreement").items()) {
          r.gate_stats.per_attribute[name] = v.get<double>();
        }
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kSchemaViolation, e.what());
  }
  return r;
}

DomainRoute PromoteDomain(const std::string& domain, const AgreementStats& stats,
                          const GateConfig& config, const std::string& timestamp) {
  DomainRoute route;
  route.domain = domain;
  route.promoted_at = timestamp;
  route.gate_stats = stats;
  bool pass = stats.holdout_pages >= config.min_holdout && !stats.per_attribute.empty();
  for (const auto& [name, rate] : stats.per_attribute) {
    if (rate < config.min_agreement) pass = false;
  }
  route.mode = pass ? RouteMode::kWi : RouteMode::kVpr;
  return route;
}

RouteRegistry::RouteRegistry(std::string path) : path_(std::move(path)) {
  if (path_.empty()) return;
  std::ifstream in(path_);
  if (!in) return;
  std::string line;
  while (std::getline(in, line)) {
    if (TrimAscii(line).empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCode::kMalformedJson, path_ + ": " + e.what());
    }
    DomainRoute r = DomainRoute::FromJson(j);
    latest_[r.domain] = std::move(r);
  }
}

void RouteRegistry::Append(const DomainRoute& route) {
  std::lock_guard<std::mutex> lock(mu_);
  if (!path_.empty()) {
    std::ofstream out(path_, std::ios::app);
    if (!out) throw Error(ErrorCode::kIo, "cannot append to " + path_);
    out << route.ToJson().dump() << "\n";
  }
  latest_[route.domain] = route;
}

std::optional<DomainRoute> RouteRegistry::Lookup(const std::string& domain) const {
  std::lock_guard<std::mutex> lock(mu_);
  const auto it = latest_.find(domain);
  if (it == latest_.end()) return std::nullopt;
  return it->second;
}

RouteMode RouteRegistry::ModeFor(const std::string& domain) const {
  const auto r = Lookup(domain);
  return r ? r->mode : RouteMode::kVpr;
}

std::vector<DomainRoute> RouteRegistry::Current() const {
  std::lock_guard<std::mutex> lock(mu_);
  std::vector<DomainRoute> out;
  for (const auto& [d, r] : latest_) out.push_back(r);
  return out;
}

DistillResult DistillDomain(const std::string& domain, const std::vector<DistillPage>& pages,
                            const ExtractorModels& models, int train_pages,
                            const WiTrainConfig& train_config, const GateConfig& gate) {
  DistillResult result;
  std::vector<std::unique_ptr<DomNode>> doms;
  std::vector<VprDocument> docs;
  std::vector<ProductMetadata> vpr_out;
  for (const DistillPage& p : pages) {
    doms.push_back(ParseHtml(p.static_html));
    docs.push_back(GenerateVpr(p.url, p.rendered_html));
    vpr_out.push_back(ExtractAll(docs.back(), models));
  }
  const size_t n_train = std::min<size_t>(std::max(train_pages, 0), pages.size());
  std::vector<WiTrainingPage> training;
  const std::string now = UtcTimestamp();
  for (size_t i = 0; i < n_train; ++i) {
    WiTrainingPage tp{doms[i].get(), MapPredictionToHtmlNode(vpr_out[i], docs[i], *doms[i])};
    result.labels_accepted += tp.labels.accepted;
    result.labels_dropped += tp.labels.dropped;
    for (const auto& [kind, node] : tp.labels.nodes) {
      const auto& v = vpr_out[i].Get(kind);
      LabelRecord r;
      r.page_id = pages[i].page_id;
      r.attribute = std::string(AttributeName(kind));
      r.value = v->value;
      r.source = LabelSource::kDistilled;
      r.labeller = "vpr-extractor";
      r.timestamp = now;
      r.provenance = "vpr:" + pages[i].page_id + "#xpathId=" + std::to_string(v->xpath_id) +
                     " -> " + DomXpath(*node);
      result.labels.push_back(std::move(r));
    }
    training.push_back(std::move(tp));
  }
  result.model = TrainWiModel(domain, training, train_config);

  std::vector<ProductMetadata> holdout_vpr;
  std::vector<ProductMetadata> holdout_wi;
  for (size_t i = n_train; i < pages.size(); ++i) {
    holdout_vpr.push_back(vpr_out[i]);
    holdout_wi.push_back(WiExtract(result.model, *doms[i], pages[i].url));
  }
  result.stats = EvaluateAgreement(holdout_vpr, holdout_wi);
  result.model.agreement_rate = result.stats.overall;
  result.route = PromoteDomain(domain, result.stats, gate, now);
  return result;
}

}  // namespace vprex
