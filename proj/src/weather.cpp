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

#include "weather.hpp"

#include <array>
#include <cstdio>

#include <httplib.h>
#include <json.hpp>

#include "error.hpp"
#include "fileio.hpp"

namespace agriqa {

WeatherResult MockWeatherProvider::forecast(const std::string& state, const std::string& district) const {
  static constexpr std::array<std::string_view, 5> kSky = {
      "clear sky", "partly cloudy", "overcast", "light rain", "thunderstorms likely"};
  Fnv1a h;
  h.update(state);
  h.update("\x1f");
  h.update(district);
  const std::uint64_t x = h.digest();
  const int max_c = 24 + static_cast<int>(x % 15);
  const int min_c = max_c - 6 - static_cast<int>((x >> 8) % 6);
  const int rain = static_cast<int>((x >> 16) % 10) * 10;
  const std::string place = district.empty() && state.empty() ? std::string("your area")
                            : district.empty()                ? state
                            : state.empty()                   ? district
                                                              : district + ", " + state;
  char buf[256];
  std::snprintf(buf, sizeof(buf), "Forecast for %s: %s, max %d C, min %d C, %d%% chance of rain.",
                place.c_str(), std::string(kSky[(x >> 24) % kSky.size()]).c_str(), max_c, min_c, rain);
  return WeatherResult{true, buf, ""};
}

HttpWeatherProvider::HttpWeatherProvider(std::string url, int timeout_seconds)
    : timeout_seconds_(timeout_seconds) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) fail(ErrorKind::kInvalidArgument, "weather_url needs a scheme: " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  origin_ = url.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/" : url.substr(path_start);
}

WeatherResult HttpWeatherProvider::forecast(const std::string& state, const std::string& district) const {
  httplib::Client client(origin_);
  client.set_connection_timeout(timeout_seconds_, 0);
  client.set_read_timeout(timeout_seconds_, 0);
  const httplib::Params params = {{"state", state}, {"district", district}};
  auto res = client.Get(path_, params, httplib::Headers{});
  if (!res) return WeatherResult{false, "", "weather provider unreachable: " + httplib::to_string(res.error())};
  if (res->status != 200) {
    return WeatherResult{false, "", "weather provider returned HTTP " + std::to_string(res->status)};
  }
  std::string text = res->body;
  const auto parsed = nlohmann::json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (parsed.is_object() && parsed.contains("forecast") && parsed["forecast"].is_string()) {
    text = parsed["forecast"].get<std::string>();
  }
  text = std::string(trim(text));
  if (text.empty()) return WeatherResult{false, "", "weather provider returned an empty forecast"};
  return WeatherResult{true, text, ""};
}

std::unique_ptr<WeatherProvider> make_weather_provider(const std::string& url, bool offline) {
  if (offline || url.empty()) return std::make_unique<MockWeatherProvider>();
  return std::make_unique<HttpWeatherProvider>(url);
}

}  // namespace agriqa
