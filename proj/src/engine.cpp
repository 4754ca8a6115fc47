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

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <unordered_set>

#include "error.hpp"
#include "fileio.hpp"

namespace agriqa {

namespace {

constexpr int kMaxTopK = 100;

double config_double(const std::string& key, std::string_view v) {
  v = trim(v);
  double x = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    fail(ErrorKind::kParse, "config: " + key + " is not a number: '" + std::string(v) + "'");
  }
  return x;
}

bool config_bool(const std::string& key, std::string_view v) {
  v = trim(v);
  if (v == "1" || v == "true" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "no") return false;
  fail(ErrorKind::kParse, "config: " + key + " must be true or false");
}

fs::path config_path(std::string_view v, const fs::path& base_dir) {
  fs::path p{std::string(trim(v))};
  if (p.empty() || p.is_absolute()) return p;
  return base_dir / p;
}

std::string pending_key(const Normalizer& n, const std::string& question, const std::string& answer) {
  return n.normalize(question).joined() + '\t' + std::string(trim(answer));
}

std::size_t count_pending(const fs::path& path) {
  std::error_code ec;
  if (path.empty() || !fs::exists(path, ec)) return 0;
  try {
    std::size_t n = 0;
    for (const auto& line : split(read_file(path), '\n')) n += !trim(line).empty();
    return n;
  } catch (const std::exception&) {
    return 0;
  }
}

std::string field_string(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return "";
  if (!j[key].is_string()) fail(ErrorKind::kInvalidArgument, std::string("field '") + key + "' must be a string");
  return j[key].get<std::string>();
}

}  // namespace

ServiceConfig parse_service_config(std::string_view text, const fs::path& base_dir) {
  ServiceConfig c;
  for (const auto& [key, value] : parse_key_values(text)) {
    if (key == "index_path") c.index_path = config_path(value, base_dir);
    else if (key == "model_path") c.model_path = config_path(value, base_dir);
    else if (key == "gloss_path") c.gloss_path = config_path(value, base_dir);
    else if (key == "crops_path") c.crops_path = config_path(value, base_dir);
    else if (key == "synonyms_path") c.synonyms_path = config_path(value, base_dir);
    else if (key == "stopwords_path") c.stopwords_path = config_path(value, base_dir);
    else if (key == "pending_path") c.pending_path = config_path(value, base_dir);
    else if (key == "ui_dir") c.ui_dir = config_path(value, base_dir);
    else if (key == "threshold") c.threshold = config_double(key, value);
    else if (key == "similarity_floor") c.similarity_floor = config_double(key, value);
    else if (key == "weather_url") c.weather_url = std::string(trim(value));
    else if (key == "metric") c.metric = parse_metric(trim(value));
    else if (key == "offline_weather") c.offline_weather = config_bool(key, value);
    else if (key == "port") {
      const double p = config_double(key, value);
      if (p < 0 || p > 65535 || p != static_cast<int>(p)) fail(ErrorKind::kParse, "config: port out of range");
      c.port = static_cast<int>(p);
    } else {
      fail(ErrorKind::kParse, "config: unknown key '" + key + "'");
    }
  }
  return c;
}

ServiceConfig load_service_config(const fs::path& path) {
  if (!fs::exists(path)) fail(ErrorKind::kIo, "config file not found: " + path.string());
  return parse_service_config(read_file(path), fs::absolute(path).parent_path());
}

fs::path resolve_config_path(const fs::path& explicit_path) {
  if (!explicit_path.empty()) return explicit_path;
  if (const char* env = std::getenv("AGRIQA_CONFIG"); env && *env) return env;
  return "agriqa.conf";
}

AskRequest parse_ask_request(const nlohmann::json& j) {
  if (!j.is_object()) fail(ErrorKind::kInvalidArgument, "request body must be a JSON object");
  AskRequest r;
  r.question = field_string(j, "question");
  if (trim(r.question).empty()) fail(ErrorKind::kInvalidArgument, "question is required");
  r.state = field_string(j, "state");
  r.district = field_string(j, "district");
  if (j.contains("top_k") && !j["top_k"].is_null()) {
    if (!j["top_k"].is_number_integer()) fail(ErrorKind::kInvalidArgument, "top_k must be an integer");
    const auto k = j["top_k"].get<std::int64_t>();
    if (k < 1 || k > kMaxTopK) {
      fail(ErrorKind::kInvalidArgument, "top_k must be between 1 and " + std::to_string(kMaxTopK));
    }
    r.top_k = static_cast<int>(k);
  }
  return r;
}

std::string_view source_name(Source s) {
  switch (s) {
    case Source::kKb: return "kb";
    case Source::kWeather: return "weather";
    case Source::kEscalate: return "escalate";
  }
  return "escalate";
}

nlohmann::ordered_json to_json(const AskResponse& r) {
  nlohmann::ordered_json j;
  j["source"] = source_name(r.source);
  j["answer"] = r.answer;
  if (r.matched_question) j["matched_question"] = *r.matched_question;
  if (r.similarity) j["similarity"] = *r.similarity;
  if (r.answer_score) j["answer_score"] = *r.answer_score;
  j["alternatives"] = nlohmann::ordered_json::array();
  for (const auto& a : r.alternatives) {
    j["alternatives"].push_back({{"matched_question", a.matched_question}, {"similarity", a.similarity}});
  }
  if (r.source == Source::kEscalate) {
    j["escalation_reason"] = r.escalation_reason;
    j["provider_failure"] = r.provider_failure;
  }
  return j;
}

nlohmann::ordered_json to_json(const Health& h) {
  nlohmann::ordered_json j;
  j["status"] = "ok";
  j["index_fingerprint"] = h.index_fingerprint;
  j["model_fingerprint"] = h.model_fingerprint;
  j["entries"] = h.entries;
  j["dim"] = h.dim;
  j["threshold"] = h.threshold;
  j["similarity_floor"] = h.similarity_floor;
  j["metric"] = metric_name(h.metric);
  j["pending"] = h.pending;
  return j;
}

Engine::Engine(ServiceConfig config, std::unique_ptr<WeatherProvider> weather)
    : config_(std::move(config)), weather_(std::move(weather)) {
  if (config_.index_path.empty()) fail(ErrorKind::kInvalidArgument, "config: index_path is required");
  if (config_.pending_path.empty()) {
    const fs::path bin = index_file(config_.index_path);
    config_.pending_path = bin.parent_path() / "pending.jsonl";
  }
  if (!weather_) weather_ = make_weather_provider(config_.weather_url, config_.offline_weather);
  snapshot_ = load_snapshot();
}

std::shared_ptr<const Engine::Snapshot> Engine::load_snapshot() const {
  LexiconPaths overrides;
  overrides.gloss = config_.gloss_path;
  overrides.crops = config_.crops_path;
  overrides.synonyms = config_.synonyms_path;
  overrides.stopwords = config_.stopwords_path;
  fs::path model_dir = config_.model_path;
  if (model_dir.empty()) {
    const auto meta = read_index_meta(config_.index_path);
    if (!meta) fail(ErrorKind::kInvalidArgument, "config: model_path is required (no index.meta next to the index)");
    model_dir = meta->model_path;
  }
  auto model = load_model(model_dir, &overrides);
  auto index = load_index(index_file(config_.index_path), model.fingerprint);
  const auto fp = index.content_fingerprint();
  return std::make_shared<const Snapshot>(Snapshot{std::move(model), std::move(index), fp});
}

std::shared_ptr<const Engine::Snapshot> Engine::current() const {
  std::lock_guard lock(snapshot_mu_);
  return snapshot_;
}

void Engine::reload() {
  auto fresh = load_snapshot();
  std::lock_guard lock(snapshot_mu_);
  snapshot_ = std::move(fresh);
}

AskResponse Engine::ask(const AskRequest& request) const {
  if (trim(request.question).empty()) fail(ErrorKind::kInvalidArgument, "question is required");
  if (request.top_k < 1 || request.top_k > kMaxTopK) fail(ErrorKind::kInvalidArgument, "top_k out of range");
  const auto snap = current();
  const auto& model = snap->model;
  AskResponse r;

  if (is_weather_question(request.question, &model.normalizer)) {
    const auto w = weather_->forecast(request.state, request.district);
    if (w.ok) {
      r.source = Source::kWeather;
      r.answer = w.text;
    } else {
      r.source = Source::kEscalate;
      r.provider_failure = true;
      r.escalation_reason = "weather provider failed: " + w.error;
    }
    return r;
  }

  const auto tokens = model.normalizer.normalize_words(request.question);
  const auto emb = model.embedder().embed_tokens(tokens);
  if (!emb.embeddable) {
    r.escalation_reason = "no known words in the question";
    return r;
  }
  const auto matches = top_k(snap->index, emb.vector, static_cast<std::size_t>(request.top_k));
  for (const auto& m : matches) {
    const auto& e = snap->index.entry(m.row);
    r.alternatives.push_back(
        Alternative{e.raw_questions.empty() ? e.canonical_question : e.raw_questions.front(), m.similarity});
  }
  const auto& best = matches.front();
  const auto& entry = snap->index.entry(best.row);
  if (best.similarity < config_.similarity_floor) {
    r.escalation_reason = "similarity below floor";
    return r;
  }
  if (score(config_.metric, tokens, entry.tokens(), model.gloss) < config_.threshold) {
    r.escalation_reason = std::string(metric_name(config_.metric)) + " score below threshold";
    return r;
  }
  const auto ranked = rank_answers(tokens, entry.answers, model.normalizer, model.gloss);
  r.source = Source::kKb;
  r.answer = ranked.answer;
  r.matched_question = r.alternatives.front().matched_question;
  r.similarity = best.similarity;
  r.answer_score = ranked.score;
  return r;
}

AppendResult Engine::append_pair(const PendingPair& pair) {
  if (trim(pair.question).empty() || trim(pair.answer).empty()) {
    fail(ErrorKind::kInvalidArgument, "question and answer must both be non-empty");
  }
  const auto snap = current();
  const auto& normalizer = snap->model.normalizer;
  std::lock_guard lock(pending_mu_);
  const auto existing = load_pending(config_.pending_path);
  const std::string key = pending_key(normalizer, pair.question, pair.answer);
  for (const auto& p : existing) {
    if (pending_key(normalizer, p.question, p.answer) == key) return AppendResult{true, existing.size()};
  }
  std::error_code ec;
  if (config_.pending_path.has_parent_path()) fs::create_directories(config_.pending_path.parent_path(), ec);
  std::ofstream out(config_.pending_path, std::ios::app | std::ios::binary);
  PendingPair stored = pair;
  stored.answer = std::string(trim(pair.answer));
  out << serialize_pending(stored);
  out.flush();
  if (!out) fail(ErrorKind::kIo, "could not write pending pairs file " + config_.pending_path.string());
  return AppendResult{false, existing.size() + 1};
}

Health Engine::health() const {
  const auto snap = current();
  Health h;
  h.index_fingerprint = hex64(snap->index_fingerprint);
  h.model_fingerprint = hex64(snap->model.fingerprint);
  h.entries = snap->index.size();
  h.dim = snap->index.dim();
  h.threshold = config_.threshold;
  h.similarity_floor = config_.similarity_floor;
  h.metric = config_.metric;
  h.pending = count_pending(config_.pending_path);
  return h;
}

}  // namespace agriqa
