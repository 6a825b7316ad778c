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

#include <gtest/gtest.h>

#include <filesystem>
#include <set>

#include "trained_models.h"
#include "vprex/gbdt.h"
#include "vprex/html.h"
#include "vprex/render.h"

namespace vprex {
namespace {

std::vector<SyntheticPage> HeldOut() {
  SynthConfig c;
  c.num_domains = 10;
  c.pages_per_domain = 10;
  c.mix = {0.7, 0.1, 0.1, 0.1, 0.0, 0.55};
  c.seed = 9001;
  return GenerateSyntheticCorpus(c);
}

TEST(Experiment, LabelRecordsInvert) {
  for (const auto& p : HeldOut()) {
    const auto dom = ParseHtml(p.rendered_html);
    const VprDocument doc = GenerateVpr(p.url, *dom);
    const PageLabels labels = GroundTruthLabels(*dom, doc);
    const auto records = SyntheticLabelRecords(p, labels);
    const PageLabels back = PageLabelsFromRecords(records);
    EXPECT_EQ(back.title, labels.title);
    EXPECT_EQ(back.main_image, labels.main_image);
    EXPECT_EQ(back.sale_price, labels.sale_price);
    EXPECT_EQ(back.list_price, labels.list_price);
    EXPECT_EQ(PageTypeFromRecords(records), p.type);
    for (const auto& r : records) {
      EXPECT_EQ(r.page_id, p.page_id);
      EXPECT_EQ(r.source, LabelSource::kSynthetic);
    }
  }
}

TEST(Experiment, DatasetOnDiskRoundTrips) {
  const auto dir = std::filesystem::temp_directory_path() / "vprex_dataset";
  std::filesystem::remove_all(dir);
  const auto pages = HeldOut();
  const DatasetManifest m = WriteSyntheticDataset(dir.string(), pages, 0.7, 3);
  EXPECT_NO_THROW(m.CheckLeakage());
  const std::string manifest = (dir / "manifest.jsonl").string();
  EXPECT_EQ(DatasetManifest::Load(manifest).entries, m.entries);
  const auto train = LoadSplit(manifest, Split::kTrain);
  const auto test = LoadSplit(manifest, Split::kTest);
  EXPECT_EQ(train.size() + test.size(), pages.size());
  std::set<std::string> train_domains;
  for (const auto& p : train) train_domains.insert(p.domain);
  for (const auto& p : test) EXPECT_EQ(train_domains.count(p.domain), 0u) << p.domain;
  // Stored VPR equals a fresh render of the stored html.
  const auto rendered = RenderSyntheticCorpus(pages, gbdt::Execution::kSerial);
  std::map<std::string, const LabeledPage*> by_id;
  for (const auto& p : rendered) by_id[p.page_id] = &p;
  for (const auto& p : train) {
    EXPECT_EQ(p.doc, by_id.at(p.page_id)->doc);
    EXPECT_EQ(p.type, by_id.at(p.page_id)->type);
  }
}

TEST(Experiment, ValidationIsCarvedByDomain) {
  auto pages = RenderSyntheticCorpus(HeldOut());
  const size_t n = pages.size();
  auto [fit, val] = CarveValidation(std::move(pages), 0.3);
  EXPECT_EQ(fit.size() + val.size(), n);
  EXPECT_FALSE(val.empty());
  std::set<std::string> fit_domains;
  for (const auto& p : fit) fit_domains.insert(p.domain);
  for (const auto& p : val) EXPECT_EQ(fit_domains.count(p.domain), 0u);
}

TEST(Experiment, GoldenPageAndIdempotence) {
  const ExtractorModels& models = testing::SharedModels();
  int checked = 0;
  for (const auto& p : HeldOut()) {
    if (p.type != PageType::kProduct) continue;
    const auto dom = ParseHtml(p.rendered_html);
    const VprDocument doc = GenerateVpr(p.url, *dom);
    const PageLabels labels = GroundTruthLabels(*dom, doc);
    const ProductMetadata meta = ExtractAll(doc, models);
    EXPECT_EQ(ExtractAll(doc, models), meta);
    if (checked++ > 0) continue;
    // First product page of the held-out corpus, attribute by attribute.
    ASSERT_TRUE(meta.title && meta.main_image && meta.sale_price);
    EXPECT_EQ(meta.title->xpath_id, *labels.title);
    EXPECT_EQ(meta.title->value, *p.truth.title);
    EXPECT_EQ(meta.main_image->xpath_id, *labels.main_image);
    EXPECT_EQ(meta.main_image->value, *p.truth.main_image);
    EXPECT_EQ(meta.sale_price->xpath_id, *labels.sale_price);
    EXPECT_EQ(meta.sale_price->value, *p.truth.sale_price);
    EXPECT_EQ(meta.list_price.has_value(), p.truth.list_price.has_value());
    if (meta.list_price && p.truth.list_price) {
      EXPECT_EQ(meta.list_price->value, *p.truth.list_price);
    }
    EXPECT_EQ(meta.currency, p.truth.currency);
  }
  EXPECT_GT(checked, 10);
}

TEST(Experiment, PageClassifierIsReproducible) {
  auto pages = RenderSyntheticCorpus(GenerateSyntheticCorpus(testing::TrainingCorpusConfig()));
  auto [fit, val] = CarveValidation(std::move(pages), 0.25);
  ExtractorModels a, b;
  TrainPageClassifier(a, fit, val, {0.95, 0.9}, PhraseLists::Default(), gbdt::Execution::kSerial);
  TrainPageClassifier(b, fit, val, {0.95, 0.9}, PhraseLists::Default(), gbdt::Execution::kParallel);
  ASSERT_TRUE(a.page && b.page);
  EXPECT_EQ(gbdt::SaveModel(*a.page), gbdt::SaveModel(*b.page));
  EXPECT_EQ(a.thresholds.product, b.thresholds.product);
  std::array<std::array<int, kNumPageTypes>, kNumPageTypes> ca{}, cb{};
  for (const auto& p : HeldOut()) {
    const VprDocument doc = GenerateVpr(p.url, p.rendered_html);
    const int truth = static_cast<int>(p.type);
    ++ca[truth][static_cast<int>(ClassifyPage(doc, *a.page, a.thresholds.product).type)];
    ++cb[truth][static_cast<int>(ClassifyPage(doc, *b.page, b.thresholds.product).type)];
  }
  EXPECT_EQ(ca, cb);
}

}  // namespace
}  // namespace vprex
