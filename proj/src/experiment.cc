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

#include "vprex/experiment.h"

#include <filesystem>

#include "json.hpp"
#include "vprex/error.h"
#include "vprex/html.h"
#include "vprex/render.h"
#include "vprex/text_util.h"

namespace fs = std::filesystem;

namespace vprex {
namespace {

constexpr char kSyntheticLabeller[] = "synth";

LabelRecord Record(const SyntheticPage& page, const std::string& attribute,
                   const std::optional<std::string>& value, std::optional<int> xpath_id) {
  LabelRecord r;
  r.page_id = page.page_id;
  r.attribute = attribute;
  r.source = LabelSource::kSynthetic;
  r.labeller = kSyntheticLabeller;
  r.timestamp = "1970-01-01T00:00:00Z";
  if (value) {
    r.value = *value;
    r.xpath_id = xpath_id;
  } else {
    r.absent = true;
  }
  return r;
}

std::string SafeName(const std::string& page_id) {
  std::string out = page_id;
  for (char& c : out) {
    if (c == '/' || c == '\\' || c == ':') c = '_';
  }
  return out;
}

std::vector<LabeledPage> PagesOf(const std::vector<LabeledPage>& pages) {
  std::vector<LabeledPage> out;
  for (const LabeledPage& p : pages) {
    if (!p.type || *p.type == PageType::kProduct) out.push_back(p);
  }
  return out;
}

void Unpack(const std::vector<LabeledPage>& pages, std::vector<VprDocument>& docs,
            std::vector<PageLabels>& labels) {
  for (const LabeledPage& p : pages) {
    docs.push_back(p.doc);
    labels.push_back(p.labels);
  }
}

}  // namespace

std::vector<LabelRecord> SyntheticLabelRecords(const SyntheticPage& page,
                                               const PageLabels& labels) {
  std::vector<LabelRecord> out;
  if (page.type == PageType::kProduct) {
    out.push_back(Record(page, "title", page.truth.title, labels.title));
    out.push_back(Record(page, "mainImage", page.truth.main_image, labels.main_image));
    out.push_back(Record(page, "salePrice", page.truth.sale_price, labels.sale_price));
    out.push_back(Record(page, "listPrice", page.truth.list_price, labels.list_price));
    out.push_back(Record(page, "currency", page.truth.currency, std::nullopt));
  }
  out.push_back(Record(page, "pageType", std::string(PageTypeName(page.type)), std::nullopt));
  return out;
}

PageLabels PageLabelsFromRecords(const std::vector<LabelRecord>& records) {
  PageLabels labels;
  for (const LabelRecord& r : records) {
    if (r.absent || !r.xpath_id) continue;
    if (r.attribute == "title") labels.title = r.xpath_id;
    if (r.attribute == "mainImage") labels.main_image = r.xpath_id;
    if (r.attribute == "salePrice") labels.sale_price = r.xpath_id;
    if (r.attribute == "listPrice") labels.list_price = r.xpath_id;
  }
  return labels;
}

std::optional<PageType> PageTypeFromRecords(const std::vector<LabelRecord>& records) {
  for (const LabelRecord& r : records) {
    if (r.attribute == "pageType" && !r.absent) return ParsePageType(r.value);
  }
  return std::nullopt;
}

std::vector<LabeledPage> RenderSyntheticCorpus(const std::vector<SyntheticPage>& pages,
                                               gbdt::Execution execution) {
  std::vector<LabeledPage> out(pages.size());
  const long n = static_cast<long>(pages.size());
#pragma omp parallel for schedule(dynamic) if (execution == gbdt::Execution::kParallel)
  for (long i = 0; i < n; ++i) {
    const SyntheticPage& p = pages[i];
    const auto dom = ParseHtml(p.rendered_html);
    LabeledPage& lp = out[i];
    lp.page_id = p.page_id;
    lp.domain = p.domain;
    lp.doc = GenerateVpr(p.url, *dom);
    if (p.type == PageType::kProduct) lp.labels = GroundTruthLabels(*dom, lp.doc);
    lp.type = p.type;
    lp.records = SyntheticLabelRecords(p, lp.labels);
  }
  return out;
}

DatasetManifest WriteSyntheticDataset(const std::string& dir,
                                      const std::vector<SyntheticPage>& pages,
                                      double train_fraction, uint64_t seed) {
  for (const char* sub : {"static", "rendered", "vpr", "labels"}) {
    fs::create_directories(fs::path(dir) / sub);
  }
  const std::vector<LabeledPage> rendered = RenderSyntheticCorpus(pages);
  std::vector<ManifestEntry> entries;
  std::string index;
  for (size_t i = 0; i < pages.size(); ++i) {
    const SyntheticPage& p = pages[i];
    const std::string name = SafeName(p.page_id);
    ManifestEntry e;
    e.page_id = p.page_id;
    e.domain = p.domain;
    e.vpr_path = "vpr/" + name + ".vpr.json";
    e.html_path = "rendered/" + name + ".html";
    e.label_path = "labels/" + name + ".jsonl";
    const std::string static_path = "static/" + name + ".html";
    WriteFile((fs::path(dir) / static_path).string(), p.html);
    WriteFile((fs::path(dir) / e.html_path).string(), p.rendered_html);
    WriteFile((fs::path(dir) / e.vpr_path).string(), SerializeVpr(rendered[i].doc));
    SaveLabels((fs::path(dir) / e.label_path).string(), rendered[i].records);
    nlohmann::ordered_json j;
    j["pageId"] = p.page_id;
    j["domain"] = p.domain;
    j["url"] = p.url;
    j["staticHtml"] = static_path;
    j["renderedHtml"] = e.html_path;
    index += j.dump() + "\n";
    entries.push_back(std::move(e));
  }
  WriteFile((fs::path(dir) / "pages.jsonl").string(), index);
  DatasetManifest manifest = SplitByDomain(std::move(entries), train_fraction, seed);
  manifest.Save((fs::path(dir) / "manifest.jsonl").string());
  return manifest;
}

std::vector<LabeledPage> LoadSplit(const std::string& manifest_path, Split split) {
  const DatasetManifest manifest = DatasetManifest::Load(manifest_path);
  const fs::path base = fs::path(manifest_path).parent_path();
  const auto resolve = [&](const std::string& p) {
    return fs::path(p).is_absolute() ? p : (base / p).string();
  };
  std::vector<LabeledPage> out;
  for (const ManifestEntry& e : manifest.entries) {
    if (e.split != split) continue;
    LabeledPage lp;
    lp.page_id = e.page_id;
    lp.domain = e.domain;
    lp.doc = ParseVpr(ReadFile(resolve(e.vpr_path)));
    if (!e.label_path.empty()) {
      lp.records = LoadLabels(resolve(e.label_path));
      lp.labels = PageLabelsFromRecords(lp.records);
      lp.type = PageTypeFromRecords(lp.records);
    }
    out.push_back(std::move(lp));
  }
  return out;
}

std::pair<std::vector<LabeledPage>, std::vector<LabeledPage>> CarveValidation(
    std::vector<LabeledPage> pages, double fraction) {
  std::pair<std::vector<LabeledPage>, std::vector<LabeledPage>> out;
  const uint64_t cut = static_cast<uint64_t>(fraction * 1000.0);
  for (LabeledPage& p : pages) {
    const bool validation = Fnv1a64(p.domain) % 1000 < cut;
    (validation ? out.second : out.first).push_back(std::move(p));
  }
  return out;
}

ExtractorModels TrainExtractors(const std::vector<LabeledPage>& fit,
                                const std::vector<LabeledPage>& validation,
                                const TuneTarget& target, gbdt::Execution execution) {
  std::vector<VprDocument> docs;
  std::vector<PageLabels> labels;
  Unpack(PagesOf(fit), docs, labels);
  if (docs.empty()) throw Error(ErrorCode::kEmptyDataset, "no product pages to train on");
  ExtractorModels models;
  models.title = TrainCandidateModel(ModelKind::kTitle, docs, labels,
                                     DefaultCandidateTrainConfig(ModelKind::kTitle), execution);
  models.main_image =
      TrainCandidateModel(ModelKind::kMainImage, docs, labels,
                          DefaultCandidateTrainConfig(ModelKind::kMainImage), execution);
  models.price = TrainCandidateModel(ModelKind::kPrice, docs, labels,
                                     DefaultCandidateTrainConfig(ModelKind::kPrice), execution);
  std::vector<VprDocument> vdocs;
  std::vector<PageLabels> vlabels;
  Unpack(PagesOf(validation), vdocs, vlabels);
  TuneAttributeThresholds(models, vdocs, vlabels, target.precision, target.min_recall);
  return models;
}

void TrainPageClassifier(ExtractorModels& models, const std::vector<LabeledPage>& fit,
                         const std::vector<LabeledPage>& validation, const TuneTarget& target,
                         const PhraseLists& phrases, gbdt::Execution execution) {
  std::vector<VprDocument> docs;
  std::vector<PageType> types;
  for (const LabeledPage& p : fit) {
    if (!p.type) continue;
    docs.push_back(p.doc);
    types.push_back(*p.type);
  }
  if (docs.empty()) throw Error(ErrorCode::kEmptyDataset, "no pages with a page type");
  models.page = TrainPageModel(docs, types, DefaultPageTrainConfig(), phrases, execution);
  std::vector<double> scores;
  std::vector<PageType> vtypes;
  for (const LabeledPage& p : validation) {
    if (!p.type) continue;
    scores.push_back(ClassifyPage(p.doc, *models.page, 0.0, phrases).scores[0]);
    vtypes.push_back(*p.type);
  }
  models.thresholds.product =
      TuneProductThreshold(scores, vtypes, target.precision, target.min_recall);
}

}  // namespace vprex
