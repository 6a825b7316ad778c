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

#ifndef VPREX_EXPERIMENT_H_
#define VPREX_EXPERIMENT_H_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vprex/dataset.h"
#include "vprex/extract.h"
#include "vprex/gbdt_train.h"
#include "vprex/page_classifier.h"
#include "vprex/synth.h"
#include "vprex/vpr.h"

namespace vprex {

// A rendered page with its labels as VPR xpath ids.
struct LabeledPage {
  std::string page_id;
  std::string domain;
  VprDocument doc;
  PageLabels labels;
  std::optional<PageType> type;
  std::vector<LabelRecord> records;
};

// Renders the rendered_html of every page and maps its markers to labels.
std::vector<LabeledPage> RenderSyntheticCorpus(
    const std::vector<SyntheticPage>& pages,
    gbdt::Execution execution = gbdt::Execution::kParallel);

// Label records for one synthetic page: one per present attribute (with
// xpathId where the attribute is an element), absent records for missing
// ones, and a "pageType" record.
std::vector<LabelRecord> SyntheticLabelRecords(const SyntheticPage& page,
                                               const PageLabels& labels);

PageLabels PageLabelsFromRecords(const std::vector<LabelRecord>& records);
std::optional<PageType> PageTypeFromRecords(const std::vector<LabelRecord>& records);

// Writes static/, rendered/, vpr/ and labels/ under `dir`, plus
// manifest.jsonl (domain-disjoint split) and pages.jsonl (one
// {pageId, domain, url, staticHtml, renderedHtml} line per page).
DatasetManifest WriteSyntheticDataset(const std::string& dir,
                                      const std::vector<SyntheticPage>& pages,
                                      double train_fraction, uint64_t seed);

// Loads the pages of one split; relative paths resolve against the
// manifest's directory.
std::vector<LabeledPage> LoadSplit(const std::string& manifest_path, Split split);

// Deterministic domain-level carve: domains whose hash falls in the first
// `fraction` go to validation.
std::pair<std::vector<LabeledPage>, std::vector<LabeledPage>> CarveValidation(
    std::vector<LabeledPage> pages, double fraction);

struct TuneTarget {
  double precision = 0.99;
  double min_recall = 0.0;
};

// Trains title, image and price models on `fit` (product pages with labels)
// and tunes the four attribute thresholds on `validation`.
ExtractorModels TrainExtractors(const std::vector<LabeledPage>& fit,
                                const std::vector<LabeledPage>& validation,
                                const TuneTarget& target,
                                gbdt::Execution execution = gbdt::Execution::kParallel);

// Trains the page classifier on `fit` and tunes the PRODUCT threshold on
// `validation`; the result is stored in `models`.
void TrainPageClassifier(ExtractorModels& models, const std::vector<LabeledPage>& fit,
                         const std::vector<LabeledPage>& validation, const TuneTarget& target,
                         const PhraseLists& phrases = PhraseLists::Default(),
                         gbdt::Execution execution = gbdt::Execution::kParallel);

}  // namespace vprex

#endif  // VPREX_EXPERIMENT_H_
