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

#include <gtest/gtest.h>

#include <filesystem>

#include "httplib.h"
#include "vprex/error.h"
#include "vprex/render.h"
#include "vprex/text_util.h"
#include "vprex/vpr.h"

namespace vprex {
namespace {

class LabelServerTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("vprex_labeler_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    std::filesystem::remove_all(dir_);
    std::filesystem::create_directories(dir_ / "static");
    WriteFile((dir_ / "static/p1.html").string(),
              "<h1>Blue Shirt</h1><p><s>$25.00</s> $19.99</p>");
    WriteFile((dir_ / "static/p2.html").string(), "<h1>Red Hat</h1><p>$9.00</p>");
    manifest_.entries = {{"p1", "a.test", Split::kTrain, "", "static/p1.html", ""},
                         {"p2", "b.test", Split::kTest, "", "static/p2.html", ""}};
    labels_path_ = (dir_ / "labels.jsonl").string();
    Restart();
  }

  void TearDown() override {
    server_.reset();
    store_.reset();
    std::filesystem::remove_all(dir_);
  }

  void Restart() {
    server_.reset();
    store_ = std::make_unique<LabelStore>(manifest_, dir_.string(), labels_path_);
    server_ = std::make_unique<LabelServer>(*store_);
    port_ = server_->Start("127.0.0.1", 0);
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
  }

  httplib::Result Post(const nlohmann::json& body) {
    return client_->Post("/api/v1/labels", body.dump(), "application/json");
  }

  std::filesystem::path dir_;
  DatasetManifest manifest_;
  std::string labels_path_;
  std::unique_ptr<LabelStore> store_;
  std::unique_ptr<LabelServer> server_;
  std::unique_ptr<httplib::Client> client_;
  int port_ = 0;
};

TEST_F(LabelServerTest, TaskQueueDrainsThenReportsEmpty) {
  auto r = client_->Get("/api/v1/tasks/next");
  ASSERT_TRUE(r);
  ASSERT_EQ(r->status, 200);
  auto task = nlohmann::json::parse(r->body);
  EXPECT_EQ(task["taskId"], "task-1");
  EXPECT_EQ(task["pageId"], "p1");
  EXPECT_EQ(task["status"], "assigned");
  EXPECT_EQ(task["presetValues"]["availability"][1], "out of stock");
  r = client_->Get("/api/v1/tasks/next");
  ASSERT_EQ(r->status, 200);
  EXPECT_EQ(nlohmann::json::parse(r->body)["taskId"], "task-2");
  r = client_->Get("/api/v1/tasks/next");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 204);
  EXPECT_TRUE(r->body.empty());
}

TEST_F(LabelServerTest, ServesRenderedVpr) {
  auto task = nlohmann::json::parse(client_->Get("/api/v1/tasks/next")->body);
  auto r = client_->Get(task["vprRef"].get<std::string>());
  ASSERT_TRUE(r);
  ASSERT_EQ(r->status, 200);
  const VprDocument doc = ParseVpr(r->body);
  ASSERT_EQ(doc.text_elements.size(), 3u);
  // The struck list price is its own element and keeps its style.
  EXPECT_EQ(doc.text_elements[2].text, "$25.00");
  EXPECT_TRUE(doc.text_elements[2].line_through);
  EXPECT_FALSE(doc.text_elements[1].line_through);
  EXPECT_EQ(client_->Get("/api/v1/vpr/nope")->status, 404);
}

TEST_F(LabelServerTest, ValueWithoutXpathIdIsAccepted) {
  auto r = Post({{"taskId", "task-1"}, {"attribute", "listPrice"}, {"value", "25.00"},
                 {"labeller", "ana"}});
  ASSERT_TRUE(r);
  ASSERT_EQ(r->status, 201);
  const auto stored = nlohmann::json::parse(r->body);
  EXPECT_EQ(stored["pageId"], "p1");
  EXPECT_TRUE(stored["xpathId"].is_null());
  EXPECT_EQ(stored["source"], "human");
}

TEST_F(LabelServerTest, PresetAvailability) {
  auto r = Post({{"taskId", "task-2"}, {"attribute", "availability"}, {"value", "out of stock"},
                 {"labeller", "ana"}});
  ASSERT_EQ(r->status, 201);
  EXPECT_EQ(nlohmann::json::parse(r->body)["value"], "out of stock");
  auto attrs = nlohmann::json::parse(client_->Get("/api/v1/attributes")->body);
  EXPECT_EQ(attrs["presets"]["availability"].size(), 3u);
  EXPECT_NE(std::find(attrs["attributes"].begin(), attrs["attributes"].end(), "salePrice"),
            attrs["attributes"].end());
}

TEST_F(LabelServerTest, PostThenGetRoundTripsByteIdentically) {
  const nlohmann::json body = {{"taskId", "task-1"},  {"attribute", "salePrice"},
                               {"xpathId", 4},         {"value", "19.99"},
                               {"labeller", "ana"},    {"timestamp", "2026-03-01T10:00:00Z"}};
  auto posted = Post(body);
  ASSERT_EQ(posted->status, 201);
  auto got = client_->Get("/api/v1/labels?taskId=task-1");
  ASSERT_EQ(got->status, 200);
  EXPECT_EQ(got->body, posted->body + "\n");
  // The log on disk holds the same line, and a restarted server serves it back.
  EXPECT_EQ(ReadFile(labels_path_), posted->body + "\n");
  Restart();
  EXPECT_EQ(client_->Get("/api/v1/labels")->body, posted->body + "\n");
}

TEST_F(LabelServerTest, DuplicateSubmitKeepsLatest) {
  Post({{"taskId", "task-1"}, {"attribute", "title"}, {"value", "Blue"}, {"labeller", "a"}});
  Post({{"taskId", "task-2"}, {"attribute", "title"}, {"value", "Red Hat"}, {"labeller", "a"}});
  auto last = Post({{"taskId", "task-1"}, {"attribute", "title"}, {"value", "Blue Shirt"},
                    {"labeller", "a"}});
  const std::vector<std::string> lines = SplitLines(client_->Get("/api/v1/labels")->body);
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[0], last->body);
  EXPECT_EQ(nlohmann::json::parse(lines[1])["value"], "Red Hat");
}

TEST_F(LabelServerTest, TaskCompletesWhenEveryAttributeIsLabeled) {
  const auto requested =
      nlohmann::json::parse(client_->Get("/api/v1/tasks/task-1")->body)["attributesRequested"];
  ASSERT_FALSE(requested.empty());
  for (const std::string& a : requested) {
    auto t = nlohmann::json::parse(client_->Get("/api/v1/tasks/task-1")->body);
    EXPECT_NE(t["status"], "done");
    Post({{"taskId", "task-1"}, {"attribute", a}, {"value", ""}, {"absent", true}, {"labeller", "a"}});
  }
  EXPECT_EQ(nlohmann::json::parse(client_->Get("/api/v1/tasks/task-1")->body)["status"], "done");
}

TEST_F(LabelServerTest, Errors) {
  EXPECT_EQ(Post({{"taskId", "task-9"}, {"attribute", "title"}, {"value", "x"}})->status, 404);
  EXPECT_EQ(client_->Get("/api/v1/tasks/task-9")->status, 404);
  EXPECT_EQ(Post({{"taskId", "task-1"}, {"attribute", "title"}, {"value", ""}})->status, 400);
  EXPECT_EQ(Post({{"taskId", "task-1"}, {"attribute", "title"}, {"value", "x"}, {"pageId", "p2"}})
                ->status,
            400);
  EXPECT_EQ(client_->Post("/api/v1/labels", "{not json", "application/json")->status, 400);
}

TEST_F(LabelServerTest, AddressInUse) {
  LabelServer other(*store_);
  try {
    other.Start("127.0.0.1", port_);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kAddressInUse);
  }
}

}  // namespace
}  // namespace vprex
