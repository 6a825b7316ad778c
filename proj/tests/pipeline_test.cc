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

#include "vprex/pipeline.h"

#include <gtest/gtest.h>

#include "trained_models.h"
#include "vprex/html.h"
#include "vprex/render.h"
#include "vprex/url.h"

namespace vprex {
namespace {

std::vector<SyntheticPage> Corpus() {
  SynthConfig c;
  c.num_domains = 8;
  c.pages_per_domain = 12;
  c.mix = {0.5, 0.2, 0.15, 0.15, 0.0, 0.55};
  c.seed = 77;
  return GenerateSyntheticCorpus(c);
}

std::vector<PipelineInput> Inputs(const std::vector<SyntheticPage>& pages) {
  std::vector<PipelineInput> in;
  for (const auto& p : pages) in.push_back({p.page_id, p.url, p.rendered_html});
  return in;
}

TEST(Pipeline, NonProductPagesGetPageTypeOnly) {
  PipelineContext ctx;
  ctx.models = &testing::SharedModels();
  const auto pages = Corpus();
  const auto out = RunPipeline(Inputs(pages), ctx);
  ASSERT_EQ(out.size(), pages.size());
  int non_product = 0, product = 0;
  for (const auto& o : out) {
    ASSERT_FALSE(o.error.has_value()) << *o.error;
    ASSERT_TRUE(o.page_type.has_value());
    const auto j = o.ToJson();
    EXPECT_EQ(j["route"], "VPR");
    if (*o.page_type == PageType::kProduct) {
      ++product;
      EXPECT_TRUE(j.contains("attributes"));
    } else {
      ++non_product;
      EXPECT_FALSE(o.meta.has_value());
      EXPECT_FALSE(j.contains("attributes"));
    }
  }
  EXPECT_GT(product, 0);
  EXPECT_GT(non_product, 0);
}

TEST(Pipeline, WithoutPageModelEveryPageIsExtracted) {
  ExtractorModels models = testing::SharedModels();
  models.page.reset();
  PipelineContext ctx;
  ctx.models = &models;
  for (const auto& o : RunPipeline(Inputs(Corpus()), ctx)) {
    EXPECT_FALSE(o.page_type.has_value());
    EXPECT_TRUE(o.meta.has_value());
  }
}

// A promoted domain with a trained wrapper, distilled from static pages.
struct WiFixture {
  std::string domain;
  std::vector<SyntheticPage> pages;
  std::map<std::string, WiModel> wrappers;
  RouteRegistry routes;
};

void BuildWiFixture(WiFixture& f) {
  SynthConfig c;
  c.num_domains = 1;
  c.pages_per_domain = 32;
  c.seed = 5;
  f.pages = GenerateSyntheticCorpus(c);
  f.domain = f.pages[0].domain;
  std::vector<DistillPage> dp;
  for (const auto& p : f.pages) dp.push_back({p.page_id, p.url, p.html, p.rendered_html});
  const DistillResult r = DistillDomain(f.domain, dp, testing::SharedModels(), 12);
  f.wrappers[f.domain] = r.model;
  // Forced promotion: the route test is about dispatch, not the gate.
  AgreementStats perfect = r.stats;
  for (auto& [k, v] : perfect.per_attribute) v = 1.0;
  f.routes.Append(PromoteDomain(f.domain, perfect));
}

TEST(Pipeline, PromotedDomainUsesWrapper) {
  WiFixture f;
  BuildWiFixture(f);
  PipelineContext ctx;
  ctx.models = &testing::SharedModels();
  ctx.routes = &f.routes;
  ctx.wi_models = &f.wrappers;
  std::vector<PipelineInput> in;
  for (const auto& p : f.pages) in.push_back({p.page_id, p.url, p.html});
  in.push_back({"elsewhere", "https://not-promoted.test/p/1", f.pages[0].rendered_html});
  const auto out = RunPipeline(in, ctx);
  ASSERT_EQ(out.size(), in.size());
  for (size_t i = 0; i + 1 < out.size(); ++i) {
    EXPECT_EQ(out[i].route, RouteMode::kWi);
    EXPECT_EQ(out[i].ToJson()["route"], "WI");
    ASSERT_TRUE(out[i].meta.has_value());
    if (f.pages[i].type == PageType::kProduct && f.pages[i].truth.title) {
      ASSERT_TRUE(out[i].meta->title.has_value()) << f.pages[i].page_id;
      EXPECT_EQ(out[i].meta->title->value, *f.pages[i].truth.title);
    }
  }
  EXPECT_EQ(out.back().route, RouteMode::kVpr);
}

TEST(Pipeline, FailuresStayPerPage) {
  WiFixture f;
  BuildWiFixture(f);
  // A wrapper filed under the wrong domain fails on every page it is used for.
  std::map<std::string, WiModel> broken = f.wrappers;
  WiModel wrong = broken.begin()->second;
  wrong.domain = "elsewhere.test";
  broken[f.domain] = wrong;
  PipelineContext ctx;
  ctx.models = &testing::SharedModels();
  ctx.routes = &f.routes;
  ctx.wi_models = &broken;
  std::vector<PipelineInput> in = Inputs(Corpus());
  const size_t healthy = in.size();
  for (int i = 0; i < 5; ++i) in.push_back({"bad" + std::to_string(i), f.pages[i].url, f.pages[i].html});
  const auto out = RunPipeline(in, ctx);
  ASSERT_EQ(out.size(), in.size());
  for (size_t i = 0; i < out.size(); ++i) {
    EXPECT_EQ(out[i].id, in[i].id);
    EXPECT_EQ(out[i].error.has_value(), i >= healthy) << i;
  }
  EXPECT_TRUE(out.back().ToJson().contains("error"));
}

TEST(Pipeline, MissingModelsIsAnError) {
  PipelineContext ctx;
  const auto out = ProcessPage({"x", "https://a.test/", "<p>hi</p>"}, ctx);
  EXPECT_TRUE(out.error.has_value());
}

TEST(Pipeline, SerialAndParallelAgree) {
  PipelineContext ctx;
  ctx.models = &testing::SharedModels();
  const auto in = Inputs(Corpus());
  const auto a = RunPipeline(in, ctx, gbdt::Execution::kSerial);
  const auto b = RunPipeline(in, ctx, gbdt::Execution::kParallel);
  ASSERT_EQ(a.size(), b.size());
  for (size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].ToJson().dump(), b[i].ToJson().dump());

  std::vector<VprDocument> docs;
  for (const auto& p : in) docs.push_back(GenerateVpr(p.url, p.html));
  EXPECT_EQ(ExtractBatch(docs, *ctx.models, gbdt::Execution::kSerial),
            ExtractBatch(docs, *ctx.models, gbdt::Execution::kParallel));
}

}  // namespace
}  // namespace vprex
