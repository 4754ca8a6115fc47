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

// Question-answering service core: routing, pending pairs, health and
// atomic index swaps. Transport-independent.

#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pipeline.hpp"
#include "weather.hpp"

namespace agriqa {

inline constexpr double kDefaultSimilarityFloor = 0.70;

struct ServiceConfig {
  fs::path index_path;
  fs::path model_path;  // default: recorded in index.meta
  fs::path gloss_path;
  fs::path crops_path;
  fs::path synonyms_path;
  fs::path stopwords_path;
  double threshold = kDefaultThreshold;
  double similarity_floor = kDefaultSimilarityFloor;
  std::string weather_url;
  int port = 8080;
  fs::path pending_path;  // default: <index dir>/pending.jsonl
  fs::path ui_dir;
  Metric metric = Metric::kLesk;
  bool offline_weather = false;
};

/// key=value text. Relative paths are resolved against `base_dir`. Unknown
/// keys are rejected.
ServiceConfig parse_service_config(std::string_view text, const fs::path& base_dir);
ServiceConfig load_service_config(const fs::path& path);

/// An explicit path wins; otherwise $AGRIQA_CONFIG; otherwise agriqa.conf.
fs::path resolve_config_path(const fs::path& explicit_path);

struct AskRequest {
  std::string question;
  std::string state;
  std::string district;
  int top_k = 5;
};

// Throws kInvalidArgument on a missing or blank question, wrong field types
// or top_k outside [1, 100].
AskRequest parse_ask_request(const nlohmann::json& j);

struct Alternative {
  std::string matched_question;
  double similarity = 0.0;
};

enum class Source { kKb, kWeather, kEscalate };
std::string_view source_name(Source s);

struct AskResponse {
  Source source = Source::kEscalate;
  std::string answer;
  std::optional<std::string> matched_question;
  std::optional<double> similarity;
  std::optional<double> answer_score;
  std::vector<Alternative> alternatives;
  std::string escalation_reason;  // empty unless escalated
  bool provider_failure = false;
};

nlohmann::ordered_json to_json(const AskResponse& r);

struct AppendResult {
  bool duplicate = false;
  std::size_t pending = 0;
};

struct Health {
  std::string index_fingerprint;
  std::string model_fingerprint;
  std::size_t entries = 0;
  int dim = 0;
  double threshold = 0.0;
  double similarity_floor = 0.0;
  Metric metric = Metric::kLesk;
  std::size_t pending = 0;
};

nlohmann::ordered_json to_json(const Health& h);

class Engine {
 public:
  /// Loads model and index named by the config. The weather provider
  /// defaults to one built from the config.
  explicit Engine(ServiceConfig config, std::unique_ptr<WeatherProvider> weather = nullptr);

  /// Weather first, then retrieval with two confidence gates, then answer
  /// ranking. Safe to call concurrently.
  AskResponse ask(const AskRequest& request) const;

  /// Appends to the pending file unless the same normalized question and
  /// answer are already pending. Never touches the live index.
  AppendResult append_pair(const PendingPair& pair);

  Health health() const;

  /// Re-reads the model and index from the configured paths and swaps them
  /// in. On failure the current snapshot stays in place.
  void reload();

  const ServiceConfig& config() const { return config_; }

 private:
  struct Snapshot {
    ModelBundle model;
    QuestionIndex index;
    std::uint64_t index_fingerprint = 0;
  };

  std::shared_ptr<const Snapshot> load_snapshot() const;
  std::shared_ptr<const Snapshot> current() const;

  ServiceConfig config_;
  std::unique_ptr<WeatherProvider> weather_;

  mutable std::mutex snapshot_mu_;
  std::shared_ptr<const Snapshot> snapshot_;

  std::mutex pending_mu_;
};

}  // namespace agriqa
