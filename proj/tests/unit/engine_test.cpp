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

#include "engine.hpp"

#include <gtest/gtest.h>

#include <stdlib.h>

#include <thread>

#include "error.hpp"
#include "fileio.hpp"
#include "toy_fixture.hpp"

namespace agriqa {
namespace {

using test_support::TempDir;

class FailingWeather final : public WeatherProvider {
 public:
  WeatherResult forecast(const std::string&, const std::string&) const override {
    return WeatherResult{false, "", "connection refused"};
  }
};

class EngineTest : public ::testing::Test {
 protected:
  void SetUp() override {
    art_ = test_support::build_toy(tmp_.path(), {}, 3.0, /*index_all=*/true);
    config_.index_path = art_.index;
    config_.offline_weather = true;
  }

  AskResponse ask(const Engine& e, const std::string& q) const {
    AskRequest r;
    r.question = q;
    return e.ask(r);
  }

  TempDir tmp_;
  test_support::ToyArtifacts art_;
  ServiceConfig config_;
};

void expect_well_formed(const AskResponse& r) {
  if (r.source == Source::kKb) {
    EXPECT_TRUE(r.matched_question.has_value());
    EXPECT_TRUE(r.similarity.has_value());
    EXPECT_FALSE(r.answer.empty());
  }
  if (r.source == Source::kEscalate) {
    EXPECT_TRUE(r.answer.empty());
    EXPECT_FALSE(r.escalation_reason.empty());
  }
}

TEST_F(EngineTest, WeatherGoesToProvider) {
  Engine e(config_);
  AskRequest req;
  req.question = "what is the weather";
  req.state = "PUNJAB";
  req.district = "LUDHIANA";
  const auto r = e.ask(req);
  EXPECT_EQ(r.source, Source::kWeather);
  EXPECT_EQ(r.answer, MockWeatherProvider().forecast("PUNJAB", "LUDHIANA").text);
  expect_well_formed(r);
}

TEST_F(EngineTest, ProviderFailureEscalates) {
  Engine e(config_, std::make_unique<FailingWeather>());
  const auto r = ask(e, "weather forecast for next week");
  EXPECT_EQ(r.source, Source::kEscalate);
  EXPECT_TRUE(r.provider_failure);
  expect_well_formed(r);
}

TEST_F(EngineTest, IndexedQuestionServedFromKnowledgeBase) {
  Engine e(config_);
  const auto r = ask(e, "what is the market rate of wheat?");
  EXPECT_EQ(r.source, Source::kKb);
  EXPECT_EQ(r.answer, "wheat market rate \xE2\x80\x93 1800 \xE2\x80\x93 \xE2\x80\x93 2200 rups pq");
  EXPECT_EQ(r.matched_question, "wheat market rate");
  EXPECT_NEAR(*r.similarity, 1.0, 1e-6);
  EXPECT_EQ(r.alternatives.size(), 5u);
  expect_well_formed(r);
}

TEST_F(EngineTest, GibberishEscalates) {
  Engine e(config_);
  const auto r = ask(e, "qwzx plorf blick");
  EXPECT_EQ(r.source, Source::kEscalate);
  EXPECT_FALSE(r.provider_failure);
  expect_well_formed(r);
}

TEST_F(EngineTest, BothGatesCanEscalate) {
  config_.similarity_floor = 1.5;
  Engine floor(config_);
  const auto a = ask(floor, "what is the market rate of wheat?");
  EXPECT_EQ(a.source, Source::kEscalate);
  EXPECT_EQ(a.escalation_reason, "similarity below floor");
  EXPECT_FALSE(a.alternatives.empty());

  config_.similarity_floor = 0.0;
  config_.threshold = 0.99;
  Engine strict(config_);
  const auto b = ask(strict, "what is the market rate of wheat?");
  EXPECT_EQ(b.source, Source::kEscalate);
  EXPECT_EQ(b.escalation_reason, "lesk score below threshold");
}

TEST_F(EngineTest, ConcurrentAsksAgree) {
  Engine e(config_);
  const auto want = to_json(ask(e, "fertilizer dose for wheat")).dump();
  std::vector<std::thread> threads;
  std::vector<int> mismatches(4, 0);
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&, t] {
      for (int i = 0; i < 50; ++i) mismatches[static_cast<std::size_t>(t)] += to_json(ask(e, "fertilizer dose for wheat")).dump() != want;
    });
  }
  for (auto& th : threads) th.join();
  for (int m : mismatches) EXPECT_EQ(m, 0);
}

TEST_F(EngineTest, PendingPairsWaitForRebuild) {
  Engine e(config_);
  const auto before = to_json(ask(e, "banana urea market rate")).dump();
  const auto health0 = e.health();
  EXPECT_EQ(health0.entries, load_index(index_file(art_.index)).size());
  EXPECT_EQ(health0.pending, 0u);

  const PendingPair p{"banana urea market rate", "see the mandi board", "", "", ""};
  EXPECT_FALSE(e.append_pair(p).duplicate);
  const auto dup = e.append_pair({"Banana urea market rate?", " see the mandi board ", "", "", ""});
  EXPECT_TRUE(dup.duplicate);
  EXPECT_EQ(dup.pending, 1u);
  EXPECT_EQ(e.health().pending, 1u);
  EXPECT_EQ(to_json(ask(e, "banana urea market rate")).dump(), before);
  EXPECT_THROW(e.append_pair({"q", "  ", "", "", ""}), Error);

  RebuildOptions o;
  o.index = art_.index;
  o.pending = e.config().pending_path;
  run_rebuild(o);
  EXPECT_EQ(to_json(ask(e, "banana urea market rate")).dump(), before);
  e.reload();
  const auto h = e.health();
  EXPECT_NE(h.index_fingerprint, health0.index_fingerprint);
  EXPECT_EQ(h.entries, health0.entries + 1);
  EXPECT_EQ(h.pending, 0u);
  const auto r = ask(e, "banana urea market rate");
  EXPECT_EQ(r.source, Source::kKb);
  EXPECT_EQ(r.answer, "see the mandi board");
  EXPECT_EQ(r.matched_question, "banana urea market rate");
}

TEST_F(EngineTest, FailedReloadKeepsServing) {
  Engine e(config_);
  const auto h = e.health();
  write_file(index_file(art_.index), "garbage");
  EXPECT_THROW(e.reload(), Error);
  EXPECT_EQ(e.health().index_fingerprint, h.index_fingerprint);
  EXPECT_EQ(ask(e, "what is the market rate of wheat?").source, Source::kKb);
}

TEST(AskRequest, Validation) {
  const auto r = parse_ask_request(nlohmann::json::parse(R"({"question":"urea dose","top_k":3,"state":"BIHAR"})"));
  EXPECT_EQ(r.question, "urea dose");
  EXPECT_EQ(r.top_k, 3);
  EXPECT_EQ(r.state, "BIHAR");
  EXPECT_EQ(parse_ask_request(nlohmann::json::parse(R"({"question":"x"})")).top_k, 5);
  for (const char* bad : {R"({"question":"  "})", R"({})", R"({"question":3})", R"({"question":"x","top_k":0})",
                          R"({"question":"x","top_k":101})", R"({"question":"x","top_k":"2"})", R"([1])"}) {
    EXPECT_THROW(parse_ask_request(nlohmann::json::parse(bad)), Error) << bad;
  }
}

TEST(AskResponse, JsonFields) {
  AskResponse kb;
  kb.source = Source::kKb;
  kb.answer = "a";
  kb.matched_question = "q";
  kb.similarity = 0.9;
  kb.answer_score = 0.5;
  kb.alternatives = {{"q", 0.9}};
  const auto j = to_json(kb);
  EXPECT_EQ(j["source"], "kb");
  EXPECT_EQ(j["matched_question"], "q");
  EXPECT_EQ(j["alternatives"][0]["similarity"], 0.9);
  EXPECT_FALSE(j.contains("escalation_reason"));

  AskResponse esc;
  const auto k = to_json(esc);
  EXPECT_EQ(k["source"], "escalate");
  EXPECT_EQ(k["answer"], "");
  EXPECT_FALSE(k.contains("matched_question"));
  EXPECT_TRUE(k.contains("provider_failure"));
}

TEST(ServiceConfig, ParsingAndPrecedence) {
  const auto c = parse_service_config(
      "# service\nindex_path=idx\nmodel_path=/abs/model\nthreshold=0.6\nsimilarity_floor=0.8\nport=9000\n"
      "metric=jaccard\noffline_weather=true\n",
      "/base");
  EXPECT_EQ(c.index_path, fs::path("/base/idx"));
  EXPECT_EQ(c.model_path, fs::path("/abs/model"));
  EXPECT_EQ(c.threshold, 0.6);
  EXPECT_EQ(c.similarity_floor, 0.8);
  EXPECT_EQ(c.port, 9000);
  EXPECT_EQ(c.metric, Metric::kJaccard);
  EXPECT_TRUE(c.offline_weather);
  EXPECT_THROW(parse_service_config("colour=blue\n", "/"), Error);
  EXPECT_THROW(parse_service_config("threshold=high\n", "/"), Error);
  EXPECT_THROW(parse_service_config("port=70000\n", "/"), Error);

  setenv("AGRIQA_CONFIG", "/etc/agriqa-env.conf", 1);
  EXPECT_EQ(resolve_config_path("given.conf"), fs::path("given.conf"));
  EXPECT_EQ(resolve_config_path({}), fs::path("/etc/agriqa-env.conf"));
  unsetenv("AGRIQA_CONFIG");
  EXPECT_EQ(resolve_config_path({}), fs::path("agriqa.conf"));
}

TEST(Weather, MockIsDeterministic) {
  MockWeatherProvider m;
  const auto a = m.forecast("PUNJAB", "LUDHIANA");
  EXPECT_TRUE(a.ok);
  EXPECT_EQ(a.text, m.forecast("PUNJAB", "LUDHIANA").text);
  EXPECT_NE(a.text.find("LUDHIANA"), std::string::npos);
  const auto failing = HttpWeatherProvider("http://127.0.0.1:1/forecast", 1).forecast("x", "y");
  EXPECT_FALSE(failing.ok);
  EXPECT_FALSE(failing.error.empty());
}

}  // namespace
}  // namespace agriqa
