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

#include "vprex/label_server.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "httplib.h"
#include "vprex/error.h"
#include "vprex/render.h"
#include "vprex/text_util.h"
#include "vprex/vpr.h"

namespace vprex {
namespace {

const char* const kStatusNames[] = {"pending", "assigned", "done"};

void SendError(httplib::Response& res, int status, const std::string& message) {
  res.status = status;
  nlohmann::ordered_json j;
  j["error"] = message;
  res.set_content(j.dump(), "application/json");
}

int StatusFor(const Error& e) {
  switch (e.code()) {
    case ErrorCode::kNotFound:
      return 404;
    case ErrorCode::kIo:
      return 500;
    default:
      return 400;
  }
}

}  // namespace

std::string_view TaskStatusName(TaskStatus status) {
  return kStatusNames[static_cast<int>(status)];
}

nlohmann::ordered_json LabelTask::ToJson() const {
  nlohmann::ordered_json j;
  j["taskId"] = task_id;
  j["pageId"] = page_id;
  j["vprRef"] = vpr_ref;
  j["attributesRequested"] = attributes_requested;
  nlohmann::ordered_json presets = nlohmann::ordered_json::object();
  for (const auto& [attr, values] : preset_values) presets[attr] = values;
  j["presetValues"] = presets;
  j["status"] = TaskStatusName(status);
  return j;
}

std::vector<std::string> LabelAttributes() {
  return {"title", "mainImage", "salePrice", "listPrice", "currency", "availability",
          "description"};
}

std::map<std::string, std::vector<std::string>> LabelPresets() {
  return {{"availability", {"in stock", "out of stock", "pre order"}}};
}

LabelStore::LabelStore(DatasetManifest manifest, std::string base_dir, std::string labels_path)
    : manifest_(std::move(manifest)),
      base_dir_(std::move(base_dir)),
      labels_path_(std::move(labels_path)) {
  for (size_t i = 0; i < manifest_.entries.size(); ++i) {
    const ManifestEntry& e = manifest_.entries[i];
    LabelTask t;
    t.task_id = "task-" + std::to_string(i + 1);
    t.page_id = e.page_id;
    t.vpr_ref = "/api/v1/vpr/" + e.page_id;
    t.attributes_requested = {"title", "mainImage", "salePrice", "listPrice", "availability"};
    t.preset_values = LabelPresets();
    task_index_[t.task_id] = tasks_.size();
    tasks_.push_back(std::move(t));
  }
  if (labels_path_.empty() || !std::filesystem::exists(labels_path_)) return;
  std::istringstream in(ReadFile(labels_path_));
  std::string line;
  while (std::getline(in, line)) {
    if (TrimAscii(line).empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCode::kMalformedJson, labels_path_ + ": " + e.what());
    }
    const LabelRecord r = LabelRecord::FromJson(j);
    if (r.task_id && task_index_.count(*r.task_id)) Apply(r, line);
  }
}

std::string LabelStore::Resolve(const std::string& path) const {
  if (path.empty() || base_dir_.empty() || std::filesystem::path(path).is_absolute()) {
    return path;
  }
  return (std::filesystem::path(base_dir_) / path).string();
}

void LabelStore::Apply(const LabelRecord& record, const std::string& line) {
  const auto key = std::make_pair(*record.task_id, record.attribute);
  if (!latest_.count(key)) label_keys_.push_back(key);
  latest_[key] = line;
  LabelTask& task = tasks_[task_index_.at(*record.task_id)];
  bool done = true;
  for (const std::string& a : task.attributes_requested) {
    if (!latest_.count({task.task_id, a})) done = false;
  }
  if (done) task.status = TaskStatus::kDone;
}

std::optional<LabelTask> LabelStore::NextTask() {
  std::lock_guard<std::mutex> lock(mu_);
  for (LabelTask& t : tasks_) {
    if (t.status == TaskStatus::kPending) {
      t.status = TaskStatus::kAssigned;
      return t;
    }
  }
  return std::nullopt;
}

std::optional<LabelTask> LabelStore::Task(const std::string& task_id) const {
  std::lock_guard<std::mutex> lock(mu_);
  const auto it = task_index_.find(task_id);
  if (it == task_index_.end()) return std::nullopt;
  return tasks_[it->second];
}

std::string LabelStore::VprJson(const std::string& page_id) const {
  for (const ManifestEntry& e : manifest_.entries) {
    if (e.page_id != page_id) continue;
    const std::string vpr = Resolve(e.vpr_path);
    if (!vpr.empty() && std::filesystem::exists(vpr)) return ReadFile(vpr);
    const std::string html = Resolve(e.html_path);
    if (!html.empty() && std::filesystem::exists(html)) {
      return SerializeVpr(GenerateVpr("https://" + e.domain + "/" + e.page_id, ReadFile(html)));
    }
    throw Error(ErrorCode::kNotFound, "no VPR or HTML stored for " + page_id);
  }
  throw Error(ErrorCode::kNotFound, "unknown page " + page_id);
}

std::string LabelStore::AddLabel(const nlohmann::json& body) {
  if (!body.is_object()) throw Error(ErrorCode::kSchemaViolation, "label must be an object");
  if (!body.contains("taskId") || !body["taskId"].is_string()) {
    throw Error(ErrorCode::kSchemaViolation, "taskId is required");
  }
  const std::string task_id = body["taskId"].get<std::string>();
  std::lock_guard<std::mutex> lock(mu_);
  const auto it = task_index_.find(task_id);
  if (it == task_index_.end()) throw Error(ErrorCode::kNotFound, "unknown task " + task_id);
  const LabelTask& task = tasks_[it->second];
  nlohmann::json j = body;
  if (!j.contains("pageId")) j["pageId"] = task.page_id;
  LabelRecord r = LabelRecord::FromJson(j);
  if (r.page_id != task.page_id) {
    throw Error(ErrorCode::kSchemaViolation, "pageId does not belong to " + task_id);
  }
  r.source = LabelSource::kHuman;
  if (r.timestamp.empty()) r.timestamp = UtcTimestamp();
  if (r.labeller.empty()) r.labeller = "anonymous";
  const std::string line = r.ToJson().dump();
  if (!labels_path_.empty()) {
    std::ofstream out(labels_path_, std::ios::app | std::ios::binary);
    if (!out) throw Error(ErrorCode::kIo, "cannot append to " + labels_path_);
    out << line << "\n";
  }
  Apply(r, line);
  return line;
}

std::string LabelStore::Labels(const std::optional<std::string>& task_id) const {
  std::lock_guard<std::mutex> lock(mu_);
  std::string out;
  for (const auto& key : label_keys_) {
    if (task_id && key.first != *task_id) continue;
    out += latest_.at(key);
    out += "\n";
  }
  return out;
}

LabelServer::LabelServer(LabelStore& store)
    : store_(store), server_(std::make_unique<httplib::Server>()) {
  // httplib's default adds SO_REUSEPORT, which lets a second listener share
  // the port instead of failing with AddressInUse.
  server_->set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  Routes();
}

LabelServer::~LabelServer() { Stop(); }

void LabelServer::Routes() {
  httplib::Server& s = *server_;
  s.Get("/api/v1/tasks/next", [this](const httplib::Request&, httplib::Response& res) {
    const auto task = store_.NextTask();
    if (!task) {
      res.status = 204;
      return;
    }
    res.set_content(task->ToJson().dump(), "application/json");
  });
  s.Get(R"(/api/v1/tasks/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
    const auto task = store_.Task(req.matches[1]);
    if (!task) return SendError(res, 404, "unknown task " + std::string(req.matches[1]));
    res.set_content(task->ToJson().dump(), "application/json");
  });
  s.Get(R"(/api/v1/vpr/(.+))", [this](const httplib::Request& req, httplib::Response& res) {
    try {
      res.set_content(store_.VprJson(req.matches[1]), "application/json");
    } catch (const Error& e) {
      SendError(res, StatusFor(e), e.what());
    }
  });
  s.Post("/api/v1/labels", [this](const httplib::Request& req, httplib::Response& res) {
    nlohmann::json body;
    try {
      body = nlohmann::json::parse(req.body);
    } catch (const nlohmann::json::parse_error& e) {
      return SendError(res, 400, e.what());
    }
    try {
      res.status = 201;
      res.set_content(store_.AddLabel(body), "application/json");
    } catch (const Error& e) {
      SendError(res, StatusFor(e), e.what());
    }
  });
  s.Get("/api/v1/labels", [this](const httplib::Request& req, httplib::Response& res) {
    std::optional<std::string> task_id;
    if (req.has_param("taskId")) task_id = req.get_param_value("taskId");
    res.set_content(store_.Labels(task_id), "application/x-ndjson");
  });
  s.Get("/api/v1/attributes", [](const httplib::Request&, httplib::Response& res) {
    nlohmann::ordered_json j;
    j["attributes"] = LabelAttributes();
    nlohmann::ordered_json presets = nlohmann::ordered_json::object();
    for (const auto& [attr, values] : LabelPresets()) presets[attr] = values;
    j["presets"] = presets;
    res.set_content(j.dump(), "application/json");
  });
}

int LabelServer::Start(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = server_->bind_to_any_port(host);
    if (bound < 0) throw Error(ErrorCode::kAddressInUse, "cannot bind " + host);
  } else if (!server_->bind_to_port(host, port)) {
    throw Error(ErrorCode::kAddressInUse, host + ":" + std::to_string(port));
  }
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return bound;
}

void LabelServer::Run(const std::string& host, int port) {
  if (!server_->bind_to_port(host, port)) {
    throw Error(ErrorCode::kAddressInUse, host + ":" + std::to_string(port));
  }
  server_->listen_after_bind();
}

void LabelServer::Stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace vprex
