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

#ifndef VPREX_DATASET_H_
#define VPREX_DATASET_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace vprex {

enum class LabelSource { kHuman, kDistilled, kSynthetic };
std::string_view LabelSourceName(LabelSource source);  // "human", ...

// One (page, attribute) -> (element, value) label. `attribute` is an
// AttributeName() or "availability" / "description".
struct LabelRecord {
  std::string page_id;
  std::optional<std::string> task_id;
  std::string attribute;
  std::optional<int> xpath_id;
  std::string value;
  bool absent = false;  // explicitly labeled as not on the page
  LabelSource source = LabelSource::kHuman;
  std::string labeller;
  std::string timestamp;  // ISO-8601 UTC
  std::optional<std::string> provenance;

  nlohmann::ordered_json ToJson() const;
  // Throws kSchemaViolation on missing fields or an empty value that is not
  // marked absent.
  static LabelRecord FromJson(const nlohmann::json& j);

  friend bool operator==(const LabelRecord&, const LabelRecord&) = default;
};

std::vector<LabelRecord> LoadLabels(const std::string& path);
void SaveLabels(const std::string& path, const std::vector<LabelRecord>& labels);

enum class Split { kTrain, kTest };

struct ManifestEntry {
  std::string page_id;
  std::string domain;
  Split split = Split::kTrain;
  std::string vpr_path;
  std::string html_path;
  std::string label_path;

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

struct DatasetManifest {
  std::vector<ManifestEntry> entries;

  std::vector<std::string> Domains(Split split) const;
  // Throws kDomainLeakage when a domain sits in both splits.
  void CheckLeakage() const;

  // JSON lines; Load runs the leakage check.
  static DatasetManifest Load(const std::string& path);
  static DatasetManifest Parse(std::string_view jsonl);
  std::string Serialize() const;
  void Save(const std::string& path) const;
};

// Domains, not pages, are shuffled with `seed` and the first
// round(train_fraction * n) of them (at least one per side) go to train.
// Entries keep their input order. Throws kTooFewDomains below 2 domains.
DatasetManifest SplitByDomain(std::vector<ManifestEntry> pages, double train_fraction,
                              uint64_t seed);

// Current UTC time as ISO-8601 with seconds.
std::string UtcTimestamp();

}  // namespace vprex

#endif  // VPREX_DATASET_H_
