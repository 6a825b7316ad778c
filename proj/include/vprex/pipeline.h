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

#ifndef VPREX_PIPELINE_H_
#define VPREX_PIPELINE_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "vprex/extract.h"
#include "vprex/gbdt_train.h"
#include "vprex/page_classifier.h"
#include "vprex/render.h"
#include "vprex/wi.h"

namespace vprex {

struct PipelineInput {
  std::string id;
  std::string url;
  std::string html;
};

struct PipelineOutput {
  std::string id;
  std::string url;
  RouteMode route = RouteMode::kVpr;
  std::optional<PageType> page_type;
  std::optional<ProductMetadata> meta;  // only for product pages
  std::optional<std::string> error;

  // {id, url, route, pageType, attributes?, errors?, error?}
  nlohmann::ordered_json ToJson() const;
};

// Read-only state shared by every worker.
struct PipelineContext {
  const ExtractorModels* models = nullptr;
  PhraseLists phrases = PhraseLists::Default();
  const RouteRegistry* routes = nullptr;             // optional
  const std::map<std::string, WiModel>* wi_models = nullptr;  // by domain
  int viewport_width = kDefaultViewportWidth;
};

// One page: WI when its domain is promoted and a wrapper is loaded, otherwise
// render, classify and (for PRODUCT) extract. Never throws; failures land in
// `error`. Without a page model every page is treated as a product page.
PipelineOutput ProcessPage(const PipelineInput& input, const PipelineContext& ctx);

// Output i belongs to input i at any thread count.
std::vector<PipelineOutput> RunPipeline(const std::vector<PipelineInput>& inputs,
                                        const PipelineContext& ctx,
                                        gbdt::Execution execution = gbdt::Execution::kParallel);

// ExtractAll over pre-rendered documents; used by the benchmark.
std::vector<ProductMetadata> ExtractBatch(const std::vector<VprDocument>& docs,
                                          const ExtractorModels& models,
                                          gbdt::Execution execution);

}  // namespace vprex

#endif  // VPREX_PIPELINE_H_
