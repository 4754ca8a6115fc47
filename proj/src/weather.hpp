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

#pragma once

#include <memory>
#include <optional>
#include <string>

namespace agriqa {

struct WeatherResult {
  bool ok = false;
  std::string text;   // forecast when ok
  std::string error;  // reason when not ok
};

class WeatherProvider {
 public:
  virtual ~WeatherProvider() = default;
  virtual WeatherResult forecast(const std::string& state, const std::string& district) const = 0;
};

// Deterministic canned forecast derived from a hash of (state, district).
class MockWeatherProvider final : public WeatherProvider {
 public:
  WeatherResult forecast(const std::string& state, const std::string& district) const override;
};

// GET <url>?state=..&district=..; the response body is the forecast text.
// A JSON object body with a "forecast" string is also accepted.
class HttpWeatherProvider final : public WeatherProvider {
 public:
  explicit HttpWeatherProvider(std::string url, int timeout_seconds = 5);
  WeatherResult forecast(const std::string& state, const std::string& district) const override;

 private:
  std::string origin_;  // scheme://host[:port]
  std::string path_;
  int timeout_seconds_;
};

/// Mock when `offline` is set or no URL is configured.
std::unique_ptr<WeatherProvider> make_weather_provider(const std::string& url, bool offline);

}  // namespace agriqa
