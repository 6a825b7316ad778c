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

#include <exception>

#include "vprex/error.h"
#include "vprex/html.h"
#include "vprex/render.h"
#include "vprex/url.h"

namespace vprex {

nlohmann::ordered_json PipelineOutput::ToJson() const {
  nlohmann::ordered_json j;
  j["id"] = id;
  j["url"] = url;
  j["route"] = RouteModeName(route);
  j["pageType"] = page_type ? nlohmann::ordered_json(std::string(PageTypeName(*page_type)))
                            : nlohmann::ordered_json(nullptr);
  if (meta) {
    VprDocument stub;
    stub.url = url;
    const nlohmann::ordered_json ex = ExtractionToJson(stub, *meta, page_type);
    j["attributes"] = ex.at("attributes");
    if (ex.contains("errors")) j["errors"] = ex.at("errors");
  }
  if (error) j["error"] = *error;
  return j;
}

PipelineOutput ProcessPage(const PipelineInput& input, const PipelineContext& ctx) {
  PipelineOutput out;
  out.id = input.id;
  out.url = input.url;
  try {
    if (ctx.models == nullptr) throw Error(ErrorCode::kBadConfig, "no extractor models");
    if (ctx.routes != nullptr && ctx.wi_models != nullptr) {
      const std::string domain = RegistrableDomain(input.url);
      const auto it = ctx.wi_models->find(domain);
      if (it != ctx.wi_models->end() && ctx.routes->ModeFor(domain) == RouteMode::kWi) {
        out.route = RouteMode::kWi;
        const auto dom = ParseHtml(input.html);
        out.meta = WiExtract(it->second, *dom, input.url);
        return out;
      }
    }
    const VprDocument doc = GenerateVpr(input.url, input.html, ctx.viewport_width);
    if (ctx.models->page) {
      out.page_type = ClassifyPage(doc, *ctx.models->page, ctx.models->thresholds.product,
                                   ctx.phrases)
                          .type;
      if (*out.page_type != PageType::kProduct) return out;
    }
    out.meta = ExtractAll(doc, *ctx.models);
  } catch (const std::exception& e) {
    out.meta.reset();
    out.error = e.what();
  }
  return out;
}

std::vector<PipelineOutput> RunPipeline(const std::vector<PipelineInput>& inputs,
                                        const PipelineContext& ctx,
                                        gbdt::Execution execution) {
  std::vector<PipelineOutput> out(inputs.size());
  const long n = static_cast<long>(inputs.size());
#pragma omp parallel for schedule(dynamic) if (execution == gbdt::Execution::kParallel)
  for (long i = 0; i < n; ++i) out[i] = ProcessPage(inputs[i], ctx);
  return out;
}

std::vector<ProductMetadata> ExtractBatch(const std::vector<VprDocument>& docs,
                                          const ExtractorModels& models,
                                          gbdt::Execution execution) {
  std::vector<ProductMetadata> out(docs.size());
  const long n = static_cast<long>(docs.size());
#pragma omp parallel for schedule(dynamic) if (execution == gbdt::Execution::kParallel)
  for (long i = 0; i < n; ++i) out[i] = ExtractAll(docs[i], models);
  return out;
}

}  // namespace vprex
