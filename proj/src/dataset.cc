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

#include "vprex/dataset.h"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <set>

#include "vprex/error.h"
#include "vprex/synth.h"
#include "vprex/text_util.h"

namespace vprex {
namespace {

constexpr std::string_view kSourceNames[] = {"human", "distilled", "synthetic"};

std::string_view SplitName(Split s) { return s == Split::kTrain ? "train" : "test"; }

template <typename T>
T Required(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) {
    throw Error(ErrorCode::kSchemaViolation, std::string("missing field ") + key);
  }
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::kSchemaViolation, std::string("bad type for ") + key);
  }
}

nlohmann::json ParseLine(std::string_view line) {
  try {
    return nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kMalformedJson, e.what());
  }
}

}  // namespace

std::string_view LabelSourceName(LabelSource source) {
  return kSourceNames[static_cast<int>(source)];
}

nlohmann::ordered_json LabelRecord::ToJson() const {
  nlohmann::ordered_json j;
  j["pageId"] = page_id;
  if (task_id) j["taskId"] = *task_id;
  j["attribute"] = attribute;
  j["xpathId"] = xpath_id ? nlohmann::ordered_json(*xpath_id) : nullptr;
  j["value"] = value;
  if (absent) j["absent"] = true;
  j["source"] = LabelSourceName(source);
  j["labeller"] = labeller;
  j["timestamp"] = timestamp;
  if (provenance) j["provenance"] = *provenance;
  return j;
}

LabelRecord LabelRecord::FromJson(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kSchemaViolation, "label must be an object");
  LabelRecord r;
  r.page_id = Required<std::string>(j, "pageId");
  if (j.contains("taskId") && !j["taskId"].is_null()) {
    r.task_id = Required<std::string>(j, "taskId");
  }
  r.attribute = Required<std::string>(j, "attribute");
  if (j.contains("xpathId") && !j["xpathId"].is_null()) {
    r.xpath_id = Required<int>(j, "xpathId");
  }
  r.value = j.contains("value") ? Required<std::string>(j, "value") : "";
  r.absent = j.contains("absent") && Required<bool>(j, "absent");
  const std::string source = j.contains("source") ? Required<std::string>(j, "source") : "human";
  const auto it = std::find(std::begin(kSourceNames), std::end(kSourceNames), source);
  if (it == std::end(kSourceNames)) {
    throw Error(ErrorCode::kSchemaViolation, "unknown label source " + source);
  }
  r.source = static_cast<LabelSource>(it - std::begin(kSourceNames));
  r.labeller = j.contains("labeller") ? Required<std::string>(j, "labeller") : "";
  r.timestamp = j.contains("timestamp") ? Required<std::string>(j, "timestamp") : "";
  if (j.contains("provenance") && !j["provenance"].is_null()) {
    r.provenance = Required<std::string>(j, "provenance");
  }
  if (TrimAscii(r.value).empty() && !r.absent) {
    throw Error(ErrorCode::kSchemaViolation, "label value is empty");
  }
  return r;
}

std::vector<LabelRecord> LoadLabels(const std::string& path) {
  std::vector<LabelRecord> out;
  for (const std::string& line : SplitLines(ReadFile(path))) {
    if (TrimAscii(line).empty()) continue;
    out.push_back(LabelRecord::FromJson(ParseLine(line)));
  }
  return out;
}

void SaveLabels(const std::string& path, const std::vector<LabelRecord>& labels) {
  std::string text;
  for (const LabelRecord& r : labels) text += r.ToJson().dump() + "\n";
  WriteFile(path, text);
}

std::vector<std::string> DatasetManifest::Domains(Split split) const {
  std::set<std::string> set;
  for (const ManifestEntry& e : entries) {
    if (e.split == split) set.insert(e.domain);
  }
  return {set.begin(), set.end()};
}

void DatasetManifest::CheckLeakage() const {
  const std::vector<std::string> train = Domains(Split::kTrain);
  const std::vector<std::string> test = Domains(Split::kTest);
  std::vector<std::string> both;
  std::set_intersection(train.begin(), train.end(), test.begin(), test.end(),
                        std::back_inserter(both));
  if (!both.empty()) {
    throw Error(ErrorCode::kDomainLeakage, "domain in both splits: " + both.front());
  }
}

DatasetManifest DatasetManifest::Parse(std::string_view jsonl) {
  DatasetManifest m;
  for (const std::string& line : SplitLines(jsonl)) {
    if (TrimAscii(line).empty()) continue;
    const nlohmann::json j = ParseLine(line);
    ManifestEntry e;
    e.page_id = Required<std::string>(j, "pageId");
    e.domain = Required<std::string>(j, "domain");
    const std::string split = Required<std::string>(j, "split");
    if (split == "train") {
      e.split = Split::kTrain;
    } else if (split == "test") {
      e.split = Split::kTest;
    } else {
      throw Error(ErrorCode::kSchemaViolation, "unknown split " + split);
    }
    e.vpr_path = j.value("vprPath", "");
    e.html_path = j.value("htmlPath", "");
    e.label_path = j.value("labelPath", "");
    m.entries.push_back(std::move(e));
  }
  m.CheckLeakage();
  return m;
}

DatasetManifest DatasetManifest::Load(const std::string& path) {
  return Parse(ReadFile(path));
}

std::string DatasetManifest::Serialize() const {
  std::string out;
  for (const ManifestEntry& e : entries) {
    nlohmann::ordered_json j;
    j["pageId"] = e.page_id;
    j["domain"] = e.domain;
    j["split"] = SplitName(e.split);
    j["vprPath"] = e.vpr_path;
    j["htmlPath"] = e.html_path;
    j["labelPath"] = e.label_path;
    out += j.dump() + "\n";
  }
  return out;
}

void DatasetManifest::Save(const std::string& path) const { WriteFile(path, Serialize()); }

DatasetManifest SplitByDomain(std::vector<ManifestEntry> pages, double train_fraction,
                              uint64_t seed) {
  std::set<std::string> unique;
  for (const ManifestEntry& e : pages) unique.insert(e.domain);
  if (unique.size() < 2) {
    throw Error(ErrorCode::kTooFewDomains, "need at least 2 domains, got " +
                                               std::to_string(unique.size()));
  }
  if (!(train_fraction >= 0.0 && train_fraction <= 1.0)) {
    throw Error(ErrorCode::kBadConfig, "trainFraction outside [0, 1]");
  }
  std::vector<std::string> domains(unique.begin(), unique.end());
  Rng rng(seed);
  for (size_t i = domains.size(); i > 1; --i) std::swap(domains[i - 1], domains[rng.Below(i)]);
  const int n = static_cast<int>(domains.size());
  const int n_train =
      std::clamp(static_cast<int>(train_fraction * n + 0.5), 1, n - 1);
  const std::set<std::string> train(domains.begin(), domains.begin() + n_train);
  DatasetManifest m;
  m.entries = std::move(pages);
  for (ManifestEntry& e : m.entries) e.split = train.count(e.domain) ? Split::kTrain : Split::kTest;
  return m;
}

std::string UtcTimestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace vprex
