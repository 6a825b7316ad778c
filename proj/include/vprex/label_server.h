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

#ifndef VPREX_LABEL_SERVER_H_
#define VPREX_LABEL_SERVER_H_

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "vprex/dataset.h"

namespace httplib {
class Server;
}

namespace vprex {

enum class TaskStatus { kPending, kAssigned, kDone };
std::string_view TaskStatusName(TaskStatus status);

struct LabelTask {
  std::string task_id;
  std::string page_id;
  std::string vpr_ref;  // path of the VPR endpoint for this page
  std::vector<std::string> attributes_requested;
  std::map<std::string, std::vector<std::string>> preset_values;
  TaskStatus status = TaskStatus::kPending;

  nlohmann::ordered_json ToJson() const;
};

// Attributes offered to labellers and their preset values.
std::vector<std::string> LabelAttributes();
std::map<std::string, std::vector<std::string>> LabelPresets();

// Task queue and label log behind the HTTP API. One task per manifest entry,
// in manifest order. Labels already in `labels_path` are replayed on start so
// finished tasks stay done.
class LabelStore {
 public:
  LabelStore(DatasetManifest manifest, std::string base_dir, std::string labels_path);

  // First pending task, now assigned; nullopt when the queue is empty.
  std::optional<LabelTask> NextTask();
  std::optional<LabelTask> Task(const std::string& task_id) const;
  // Canonical VPR JSON for a manifest page: the stored .vpr.json, or a render
  // of its html. Throws kNotFound.
  std::string VprJson(const std::string& page_id) const;
  // Validates, fills source/timestamp defaults, appends to the log and
  // returns the stored line. Throws kNotFound for an unknown task and
  // kSchemaViolation for a bad record.
  std::string AddLabel(const nlohmann::json& body);
  // Latest line per (taskId, attribute), in first-seen order, as JSON lines.
  std::string Labels(const std::optional<std::string>& task_id) const;

 private:
  void Apply(const LabelRecord& record, const std::string& line);
  std::string Resolve(const std::string& path) const;

  DatasetManifest manifest_;
  std::string base_dir_;
  std::string labels_path_;
  std::vector<LabelTask> tasks_;
  std::map<std::string, size_t> task_index_;
  std::vector<std::pair<std::string, std::string>> label_keys_;  // first-seen order
  std::map<std::pair<std::string, std::string>, std::string> latest_;
  mutable std::mutex mu_;
};

// HTTP front end under /api/v1:
//   GET  /tasks/next        LabelTask, or 204 when the queue is empty
//   GET  /tasks/{taskId}    LabelTask
//   GET  /vpr/{pageId}      VPR JSON
//   POST /labels            LabelRecord -> 201 with the stored record
//   GET  /labels[?taskId=]  JSON lines
//   GET  /attributes        {attributes, presets}
class LabelServer {
 public:
  explicit LabelServer(LabelStore& store);
  ~LabelServer();

  // Binds and serves on a background thread. Port 0 picks a free port.
  // Throws kAddressInUse when the address cannot be bound.
  int Start(const std::string& host, int port);
  // Serves on the calling thread until Stop().
  void Run(const std::string& host, int port);
  void Stop();

 private:
  void Routes();

  LabelStore& store_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
};

}  // namespace vprex

#endif  // VPREX_LABEL_SERVER_H_
