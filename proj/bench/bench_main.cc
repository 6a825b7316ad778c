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


// Serial reference vs OpenMP kernels on one synthetic corpus.

#include <benchmark/benchmark.h>

#include <vector>

#include "vprex/experiment.h"
#include "vprex/extract.h"
#include "vprex/pipeline.h"
#include "vprex/synth.h"

namespace vprex {
namespace {

struct Corpus {
  std::vector<SyntheticPage> pages;
  std::vector<VprDocument> docs;
  std::vector<PageLabels> labels;
  ExtractorModels models;
  std::vector<PipelineInput> inputs;
};

const Corpus& SharedCorpus() {
  static const Corpus corpus = [] {
    Corpus c;
    SynthConfig config;
    config.num_domains = 30;
    config.pages_per_domain = 10;
    config.template_families = 24;
    config.mix = {0.6, 0.15, 0.1, 0.15, 0.0, 0.55};
    config.seed = 7;
    c.pages = GenerateSyntheticCorpus(config);
    auto labeled = RenderSyntheticCorpus(c.pages);
    for (const auto& p : labeled) {
      c.docs.push_back(p.doc);
      c.labels.push_back(p.labels);
    }
    auto [fit, val] = CarveValidation(std::move(labeled), 0.25);
    c.models = TrainExtractors(fit, val, TuneTarget{});
    TrainPageClassifier(c.models, fit, val, TuneTarget{0.99, 0.95});
    for (const auto& p : c.pages) c.inputs.push_back({p.page_id, p.url, p.rendered_html});
    return c;
  }();
  return corpus;
}

gbdt::Execution ExecutionArg(const benchmark::State& state) {
  return state.range(0) ? gbdt::Execution::kParallel : gbdt::Execution::kSerial;
}

void BM_TrainPriceModel(benchmark::State& state) {
  const Corpus& c = SharedCorpus();
  gbdt::TrainConfig config = DefaultCandidateTrainConfig(ModelKind::kPrice);
  config.rounds = 20;
  for (auto _ : state) {
    auto model = TrainCandidateModel(ModelKind::kPrice, c.docs, c.labels, config,
                                     ExecutionArg(state));
    benchmark::DoNotOptimize(model);
  }
}
BENCHMARK(BM_TrainPriceModel)->ArgName("parallel")->Arg(0)->Arg(1)
    ->Unit(benchmark::kMillisecond);

void BM_ExtractBatch(benchmark::State& state) {
  const Corpus& c = SharedCorpus();
  for (auto _ : state) {
    auto out = ExtractBatch(c.docs, c.models, ExecutionArg(state));
    benchmark::DoNotOptimize(out);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(c.docs.size()));
}
BENCHMARK(BM_ExtractBatch)->ArgName("parallel")->Arg(0)->Arg(1)
    ->Unit(benchmark::kMillisecond);

void BM_RunPipeline(benchmark::State& state) {
  const Corpus& c = SharedCorpus();
  PipelineContext ctx;
  ctx.models = &c.models;
  for (auto _ : state) {
    auto out = RunPipeline(c.inputs, ctx, ExecutionArg(state));
    benchmark::DoNotOptimize(out);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(c.inputs.size()));
}
BENCHMARK(BM_RunPipeline)->ArgName("parallel")->Arg(0)->Arg(1)
    ->Unit(benchmark::kMillisecond);

void BM_RenderCorpus(benchmark::State& state) {
  const Corpus& c = SharedCorpus();
  for (auto _ : state) {
    auto out = RenderSyntheticCorpus(c.pages, ExecutionArg(state));
    benchmark::DoNotOptimize(out);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(c.pages.size()));
}
BENCHMARK(BM_RenderCorpus)->ArgName("parallel")->Arg(0)->Arg(1)
    ->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace vprex

BENCHMARK_MAIN();
