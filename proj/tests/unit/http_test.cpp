// Copyright 2026 The AgriQA Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "http_server.hpp"

#include <gtest/gtest.h>

#include <httplib.h>

#include "fileio.hpp"
#include "toy_fixture.hpp"

namespace agriqa {
namespace {

using nlohmann::json;

class HttpTest : public ::testing::Test {
 protected:
  void SetUp() override {
    art_ = test_support::build_toy(tmp_.path(), {}, 3.0, /*index_all=*/true);
    fs::create_directories(tmp_ / "ui");
    write_file(tmp_ / "ui" / "index.html", "<html>chat</html>");
    ServiceConfig c;
    c.index_path = art_.index;
    c.offline_weather = true;
    c.ui_dir = tmp_ / "ui";
    engine_ = std::make_unique<Engine>(c);
    server_ = std::make_unique<HttpServer>(*engine_);
    server_->start("127.0.0.1", 0);
    client_ = std::make_unique<httplib::Client>("127.0.0.1", server_->port());
  }
  void TearDown() override {
    client_.reset();
    server_->stop();
  }

  json post(const std::string& path, const std::string& body, int expect_status = 200) {
    auto res = client_->Post(path, body, "application/json");
    EXPECT_TRUE(res);
    if (!res) return {};
    EXPECT_EQ(res->status, expect_status) << res->body;
    return json::parse(res->body);
  }

  test_support::TempDir tmp_;
  test_support::ToyArtifacts art_;
  std::unique_ptr<Engine> engine_;
  std::unique_ptr<HttpServer> server_;
  std::unique_ptr<httplib::Client> client_;
};

TEST_F(HttpTest, AskRoutesAllThreeSources) {
  const auto kb = post("/v1/ask", R"({"question":"what is the market rate of wheat?"})");
  EXPECT_EQ(kb["source"], "kb");
  EXPECT_EQ(kb["answer"], "wheat market rate \xE2\x80\x93 1800 \xE2\x80\x93 \xE2\x80\x93 2200 rups pq");
  EXPECT_EQ(kb["matched_question"], "wheat market rate");
  EXPECT_TRUE(kb["similarity"].is_number());
  EXPECT_TRUE(kb["answer_score"].is_number());

  const auto w = post("/v1/ask", R"({"question":"what is the weather","state":"BIHAR","district":"PATNA"})");
  EXPECT_EQ(w["source"], "weather");
  EXPECT_EQ(w["answer"], MockWeatherProvider().forecast("BIHAR", "PATNA").text);

  const auto esc = post("/v1/ask", R"({"question":"qwzx plorf","top_k":2})");
  EXPECT_EQ(esc["source"], "escalate");
  EXPECT_EQ(esc["answer"], "");
}

TEST_F(HttpTest, AlternativesHonourTopK) {
  const auto r = post("/v1/ask", R"({"question":"fertilizer dose for wheat","top_k":3})");
  ASSERT_TRUE(r["alternatives"].is_array());
  EXPECT_EQ(r["alternatives"].size(), 3u);
  double prev = 2.0;
  for (const auto& a : r["alternatives"]) {
    EXPECT_LE(a["similarity"].get<double>(), prev);
    prev = a["similarity"].get<double>();
  }
}

TEST_F(HttpTest, BadRequestsGet400) {
  EXPECT_TRUE(post("/v1/ask", "{not json", 400).contains("error"));
  EXPECT_TRUE(post("/v1/ask", R"({"question":""})", 400).contains("error"));
  EXPECT_TRUE(post("/v1/ask", R"({"question":"x","top_k":0})", 400).contains("error"));
  EXPECT_TRUE(post("/v1/pairs", R"({"question":"x"})", 400).contains("error"));
}

TEST_F(HttpTest, PairsHealthAndReload) {
  auto health = client_->Get("/v1/health");
  ASSERT_TRUE(health);
  EXPECT_EQ(health->status, 200);
  const auto h0 = json::parse(health->body);
  EXPECT_EQ(h0["entries"], load_index(index_file(art_.index)).size());
  EXPECT_EQ(h0["dim"], 75);
  EXPECT_EQ(h0["pending"], 0);

  const auto first = post("/v1/pairs", R"({"question":"banana urea market rate","answer":"see the mandi board"})");
  EXPECT_EQ(first["duplicate"], false);
  EXPECT_EQ(first["pending"], 1);
  const auto second = post("/v1/pairs", R"({"question":"banana urea market rate","answer":"see the mandi board"})");
  EXPECT_EQ(second["duplicate"], true);
  EXPECT_EQ(second["pending"], 1);

  RebuildOptions o;
  o.index = art_.index;
  o.pending = engine_->config().pending_path;
  run_rebuild(o);
  const auto h1 = post("/v1/reload", "");
  EXPECT_NE(h1["index_fingerprint"], h0["index_fingerprint"]);
  EXPECT_EQ(h1["entries"], h0["entries"].get<int>() + 1);

  const auto r = post("/v1/ask", R"({"question":"banana urea market rate"})");
  EXPECT_EQ(r["source"], "kb");
  EXPECT_EQ(r["answer"], "see the mandi board");
}

TEST_F(HttpTest, ServesStaticUi) {
  auto res = client_->Get("/ui/index.html");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(res->body, "<html>chat</html>");
  auto missing = client_->Get("/v1/nothing");
  ASSERT_TRUE(missing);
  EXPECT_EQ(missing->status, 404);
}

TEST_F(HttpTest, StopIsIdempotent) {
  server_->stop();
  server_->stop();
  EXPECT_FALSE(client_->Get("/v1/health"));
}

}  // namespace
}  // namespace agriqa
