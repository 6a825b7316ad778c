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

// vprex: command-line entry point.

#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "json.hpp"
#include "vprex/dataset.h"
#include "vprex/error.h"
#include "vprex/experiment.h"
#include "vprex/extract.h"
#include "vprex/gbdt.h"
#include "vprex/html.h"
#include "vprex/label_server.h"
#include "vprex/metrics.h"
#include "vprex/page_classifier.h"
#include "vprex/pipeline.h"
#include "vprex/render.h"
#include "vprex/synth.h"
#include "vprex/text_util.h"
#include "vprex/url.h"
#include "vprex/vpr.h"
#include "vprex/wi.h"

namespace fs = std::filesystem;
using namespace vprex;

namespace {

void Emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << "\n";
  } else {
    WriteFile(out, text);
  }
}

std::string Resolve(const fs::path& base, const std::string& p) {
  return fs::path(p).is_absolute() ? p : (base / p).string();
}

// pages.jsonl as written by `synth`.
struct IndexedPage {
  std::string page_id;
  std::string domain;
  std::string url;
  std::string static_html;
  std::string rendered_html;
};

std::vector<IndexedPage> LoadIndex(const std::string& path) {
  const fs::path base = fs::path(path).parent_path();
  std::vector<IndexedPage> out;
  for (const std::string& line : SplitLines(ReadFile(path))) {
    if (TrimAscii(line).empty()) continue;
    const nlohmann::json j = nlohmann::json::parse(line);
    IndexedPage p;
    p.page_id = j.at("pageId").get<std::string>();
    p.domain = j.at("domain").get<std::string>();
    p.url = j.at("url").get<std::string>();
    p.static_html = Resolve(base, j.at("staticHtml").get<std::string>());
    p.rendered_html = Resolve(base, j.value("renderedHtml", j.at("staticHtml").get<std::string>()));
    out.push_back(std::move(p));
  }
  return out;
}

std::map<std::string, WiModel> LoadWiModels(const std::string& dir) {
  std::map<std::string, WiModel> out;
  if (dir.empty() || !fs::exists(dir)) return out;
  for (const auto& e : fs::directory_iterator(dir)) {
    const std::string name = e.path().filename().string();
    if (!name.ends_with(".wi.json")) continue;
    WiModel m = WiModel::FromJson(nlohmann::json::parse(ReadFile(e.path().string())));
    out[m.domain] = std::move(m);
  }
  return out;
}

AttributeThresholds LoadThresholdsOrDefault(const std::string& dir) {
  const fs::path p = fs::path(dir) / "thresholds.json";
  if (!fs::exists(p)) return {};
  return AttributeThresholds::FromJson(nlohmann::json::parse(ReadFile(p.string())));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vprex: product attribute extraction over visual page representations"};
  app.require_subcommand(1);

  // render
  std::string url;
  std::string html_path;
  std::string out_path;
  int viewport = kDefaultViewportWidth;
  auto* render = app.add_subcommand("render", "Render an HTML file to canonical VPR JSON");
  render->add_option("--url", url, "Page URL")->required();
  render->add_option("--html", html_path, "HTML file")->required()->check(CLI::ExistingFile);
  render->add_option("--viewport-width", viewport, "Viewport width in px");
  render->add_option("--out", out_path, "Output file (default stdout)");

  // classify-page
  std::string models_dir;
  std::string vpr_path;
  auto* classify = app.add_subcommand("classify-page", "Predict the page type of a VPR");
  classify->add_option("--vpr", vpr_path, "VPR JSON file")->required()->check(CLI::ExistingFile);
  classify->add_option("--models", models_dir, "Model directory")->required();

  // train-page / train-attr / tune
  std::string manifest_path;
  double precision = 0.99;
  double min_recall = 0.0;
  double val_fraction = 0.25;
  auto* train_page = app.add_subcommand("train-page", "Train the page type classifier");
  auto* train_attr = app.add_subcommand("train-attr", "Train the attribute extractors");
  auto* tune = app.add_subcommand("tune", "Re-tune thresholds of existing models");
  for (CLI::App* c : {train_page, train_attr, tune}) {
    c->add_option("--manifest", manifest_path, "Dataset manifest")->required();
    c->add_option("--models", models_dir, "Model directory")->required();
    c->add_option("--precision", precision, "Target precision")->check(CLI::Range(0.0, 1.0));
    c->add_option("--min-recall", min_recall, "Recall floor")->check(CLI::Range(0.0, 1.0));
    c->add_option("--validation-fraction", val_fraction,
                  "Share of train domains held out for tuning")
        ->check(CLI::Range(0.0, 1.0));
  }

  // extract
  auto* extract = app.add_subcommand("extract", "Extract product attributes from one page");
  extract->add_option("--url", url, "Page URL")->required();
  extract->add_option("--html", html_path, "HTML file")->required()->check(CLI::ExistingFile);
  extract->add_option("--models", models_dir, "Model directory")->required();

  // pipeline
  std::string input_path;
  std::string routes_path;
  std::string wi_dir;
  int threads = 0;
  bool serial = false;
  auto* pipeline = app.add_subcommand("pipeline", "Run classify + extract over many pages");
  pipeline->add_option("--input", input_path, "pages.jsonl index")->required()->check(
      CLI::ExistingFile);
  pipeline->add_option("--models", models_dir, "Model directory")->required();
  pipeline->add_option("--routes", routes_path, "Route registry (JSON lines)");
  pipeline->add_option("--wi-dir", wi_dir, "Directory of *.wi.json wrappers");
  pipeline->add_option("--threads", threads, "Worker threads (0 = all cores)");
  pipeline->add_flag("--serial", serial, "Use the serial reference loop");
  pipeline->add_option("--out", out_path, "Output JSON lines (default stdout)");

  // distill / promote
  int train_pages = 12;
  GateConfig gate;
  auto* distill = app.add_subcommand("distill", "Train per-domain wrappers from VPR output");
  distill->add_option("--input", input_path, "pages.jsonl index")->required()->check(
      CLI::ExistingFile);
  distill->add_option("--models", models_dir, "Model directory")->required();
  distill->add_option("--wi-dir", wi_dir, "Output directory for wrappers")->required();
  distill->add_option("--train-pages", train_pages, "Labeled pages per domain");
  std::string labels_out;
  distill->add_option("--labels-out", labels_out, "Write distilled labels (JSON lines)");
  auto* promote = app.add_subcommand("promote", "Apply the agreement gate to distilled domains");
  promote->add_option("--wi-dir", wi_dir, "Directory of wrappers and stats")->required();
  promote->add_option("--routes", routes_path, "Route registry (JSON lines)")->required();
  promote->add_option("--min-holdout", gate.min_holdout, "Minimum holdout pages");
  promote->add_option("--min-agreement", gate.min_agreement, "Minimum per-attribute agreement");

  // eval
  std::string report_path;
  auto* eval = app.add_subcommand("eval", "Precision/recall on the test split");
  eval->add_option("--manifest", manifest_path, "Dataset manifest")->required();
  eval->add_option("--models", models_dir, "Model directory")->required();
  eval->add_option("--report", report_path, "JSON report path");

  // synth
  SynthConfig synth_config;
  double train_fraction = 0.7;
  std::string out_dir;
  auto* synth = app.add_subcommand("synth", "Generate a labeled synthetic corpus");
  synth->add_option("--out", out_dir, "Output directory")->required();
  synth->add_option("--domains", synth_config.num_domains, "Number of domains");
  synth->add_option("--pages", synth_config.pages_per_domain, "Pages per domain");
  synth->add_option("--families", synth_config.template_families, "Template families");
  synth->add_option("--dynamic-fraction", synth_config.dynamic_price_fraction,
                    "Share of domains with script-rendered prices");
  synth->add_option("--list-fraction", synth_config.list_price_fraction,
                    "Share of product pages with a list price");
  synth->add_option("--soft404", synth_config.mix.soft404, "Weight of SOFT404 pages");
  synth->add_option("--junk", synth_config.mix.junk, "Weight of JUNK pages");
  synth->add_option("--other", synth_config.mix.other, "Weight of OTHER pages");
  synth->add_option("--seed", synth_config.seed, "Seed");
  synth->add_option("--train-fraction", train_fraction, "Share of domains in train");

  // serve-labeler
  std::string bind = "127.0.0.1:8080";
  std::string labels_path = "labels.jsonl";
  auto* serve = app.add_subcommand("serve-labeler", "Serve the labelling HTTP API");
  serve->add_option("--manifest", manifest_path, "Dataset manifest")->required()->check(
      CLI::ExistingFile);
  serve->add_option("--labels", labels_path, "Label log (JSON lines)");
  serve->add_option("--bind", bind, "host:port");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*render) {
      Emit(SerializeVpr(GenerateVpr(url, ReadFile(html_path), viewport)), out_path);
    } else if (*classify) {
      const ExtractorModels models = ExtractorModels::Load(models_dir);
      if (!models.page) throw Error(ErrorCode::kBadConfig, "no page.model.json in " + models_dir);
      const auto c = ClassifyPage(ParseVpr(ReadFile(vpr_path)), *models.page,
                                  models.thresholds.product);
      nlohmann::ordered_json j;
      j["pageType"] = PageTypeName(c.type);
      j["scores"] = c.scores;
      Emit(j.dump(), "");
    } else if (*train_page) {
      auto [fit, val] = CarveValidation(LoadSplit(manifest_path, Split::kTrain), val_fraction);
      ExtractorModels models;
      TrainPageClassifier(models, fit, val, {precision, min_recall});
      fs::create_directories(models_dir);
      WriteFile((fs::path(models_dir) / "page.model.json").string(), gbdt::SaveModel(*models.page));
      AttributeThresholds t = LoadThresholdsOrDefault(models_dir);
      t.product = models.thresholds.product;
      WriteFile((fs::path(models_dir) / "thresholds.json").string(), t.ToJson().dump(2));
      std::cerr << "page model: " << fit.size() << " pages, product threshold " << t.product
                << "\n";
    } else if (*train_attr) {
      auto [fit, val] = CarveValidation(LoadSplit(manifest_path, Split::kTrain), val_fraction);
      ExtractorModels models = TrainExtractors(fit, val, {precision, min_recall});
      const AttributeThresholds old = LoadThresholdsOrDefault(models_dir);
      models.thresholds.product = old.product;
      const fs::path page = fs::path(models_dir) / "page.model.json";
      if (fs::exists(page)) models.page = gbdt::LoadModel(ReadFile(page.string()));
      models.Save(models_dir);
      std::cerr << "attribute models: " << fit.size() << " pages\n"
                << models.thresholds.ToJson().dump(2) << "\n";
    } else if (*tune) {
      ExtractorModels models = ExtractorModels::Load(models_dir);
      auto [fit, val] = CarveValidation(LoadSplit(manifest_path, Split::kTrain), val_fraction);
      std::vector<VprDocument> docs;
      std::vector<PageLabels> labels;
      for (const LabeledPage& p : val) {
        if (p.type && *p.type != PageType::kProduct) continue;
        docs.push_back(p.doc);
        labels.push_back(p.labels);
      }
      TuneAttributeThresholds(models, docs, labels, precision, min_recall);
      if (models.page) {
        std::vector<double> scores;
        std::vector<PageType> types;
        for (const LabeledPage& p : val) {
          if (!p.type) continue;
          scores.push_back(ClassifyPage(p.doc, *models.page, 0.0).scores[0]);
          types.push_back(*p.type);
        }
        models.thresholds.product = TuneProductThreshold(scores, types, precision, min_recall);
      }
      models.Save(models_dir);
      std::cerr << models.thresholds.ToJson().dump(2) << "\n";
    } else if (*extract) {
      const ExtractorModels models = ExtractorModels::Load(models_dir);
      const PipelineContext ctx{&models};
      const PipelineOutput out = ProcessPage({html_path, url, ReadFile(html_path)}, ctx);
      Emit(out.ToJson().dump(), "");
      if (out.error) return 1;
    } else if (*pipeline) {
      const ExtractorModels models = ExtractorModels::Load(models_dir);
      const RouteRegistry routes(routes_path);
      const auto wi = LoadWiModels(wi_dir);
      PipelineContext ctx{&models};
      ctx.routes = &routes;
      ctx.wi_models = &wi;
      std::vector<PipelineInput> inputs;
      for (const IndexedPage& p : LoadIndex(input_path)) {
        // Promoted domains are served from the static HTML.
        const bool wi_route = wi.count(RegistrableDomain(p.url)) &&
                              routes.ModeFor(RegistrableDomain(p.url)) == RouteMode::kWi;
        inputs.push_back({p.page_id, p.url, ReadFile(wi_route ? p.static_html : p.rendered_html)});
      }
#ifdef _OPENMP
      if (threads > 0) omp_set_num_threads(threads);
#endif
      const auto outputs = RunPipeline(
          inputs, ctx, serial ? gbdt::Execution::kSerial : gbdt::Execution::kParallel);
      std::string text;
      size_t failed = 0;
      for (const PipelineOutput& o : outputs) {
        text += o.ToJson().dump() + "\n";
        failed += o.error.has_value();
      }
      Emit(text, out_path);
      std::cerr << outputs.size() << " pages, " << failed << " failed\n";
    } else if (*distill) {
      const ExtractorModels models = ExtractorModels::Load(models_dir);
      std::map<std::string, std::vector<DistillPage>> by_domain;
      for (const IndexedPage& p : LoadIndex(input_path)) {
        by_domain[p.domain].push_back(
            {p.page_id, p.url, ReadFile(p.static_html), ReadFile(p.rendered_html)});
      }
      fs::create_directories(wi_dir);
      std::vector<LabelRecord> all_labels;
      for (const auto& [domain, pages] : by_domain) {
        try {
          DistillResult r = DistillDomain(domain, pages, models, train_pages, WiTrainConfig{},
                                          GateConfig{});
          WriteFile((fs::path(wi_dir) / (domain + ".wi.json")).string(), r.model.ToJson().dump());
          WriteFile((fs::path(wi_dir) / (domain + ".stats.json")).string(),
                    r.stats.ToJson().dump(2));
          all_labels.insert(all_labels.end(), r.labels.begin(), r.labels.end());
          std::cerr << domain << ": agreement " << r.stats.overall << ", labels kept "
                    << r.labels_accepted << "/" << (r.labels_accepted + r.labels_dropped)
                    << "\n";
        } catch (const Error& e) {
          std::cerr << domain << ": " << e.what() << "\n";
        }
      }
      if (!labels_out.empty()) SaveLabels(labels_out, all_labels);
    } else if (*promote) {
      RouteRegistry routes(routes_path);
      size_t promoted = 0;
      size_t total = 0;
      for (const auto& e : fs::directory_iterator(wi_dir)) {
        const std::string name = e.path().filename().string();
        if (!name.ends_with(".stats.json")) continue;
        const std::string domain = name.substr(0, name.size() - std::string(".stats.json").size());
        const nlohmann::json j = nlohmann::json::parse(ReadFile(e.path().string()));
        AgreementStats stats;
        stats.holdout_pages = j.at("holdoutPages").get<int>();
        stats.overall = j.at("overall").get<double>();
        for (const auto& [attr, v] : j.at("agreement").items()) {
          stats.per_attribute[attr] = v.get<double>();
        }
        const DomainRoute route = PromoteDomain(domain, stats, gate);
        routes.Append(route);
        ++total;
        promoted += route.mode == RouteMode::kWi;
        std::cout << domain << " " << RouteModeName(route.mode) << "\n";
      }
      std::cerr << promoted << "/" << total << " domains promoted\n";
    } else if (*eval) {
      const ExtractorModels models = ExtractorModels::Load(models_dir);
      std::vector<PredictionRecord> predictions;
      std::vector<LabelRecord> labels;
      for (const LabeledPage& p : LoadSplit(manifest_path, Split::kTest)) {
        ProductMetadata meta;
        const bool product =
            !models.page ||
            ClassifyPage(p.doc, *models.page, models.thresholds.product).type == PageType::kProduct;
        if (product) meta = ExtractAll(p.doc, models);
        for (auto& r : ToPredictions(p.page_id, meta)) predictions.push_back(std::move(r));
        for (const LabelRecord& r : p.records) {
          if (r.attribute != "pageType") labels.push_back(r);
        }
      }
      const PrReport report = ComputePr(predictions, labels);
      std::cout << report.ToTable();
      if (!report_path.empty()) WriteFile(report_path, report.ToJson().dump(2));
    } else if (*synth) {
      const auto pages = GenerateSyntheticCorpus(synth_config);
      const DatasetManifest m =
          WriteSyntheticDataset(out_dir, pages, train_fraction, synth_config.seed);
      std::cerr << pages.size() << " pages, " << m.Domains(Split::kTrain).size()
                << " train domains, " << m.Domains(Split::kTest).size() << " test domains\n";
    } else if (*serve) {
      const auto colon = bind.rfind(':');
      if (colon == std::string::npos) throw Error(ErrorCode::kBadConfig, "--bind wants host:port");
      LabelStore store(DatasetManifest::Load(manifest_path),
                       fs::path(manifest_path).parent_path().string(), labels_path);
      LabelServer server(store);
      std::cerr << "serving on " << bind << "\n";
      server.Run(bind.substr(0, colon), std::stoi(bind.substr(colon + 1)));
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
