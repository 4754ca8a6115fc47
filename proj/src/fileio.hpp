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

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace agriqa {

std::string read_file(const std::filesystem::path& path);

// Writes via a sibling temporary file and rename, so readers never observe a
// half-written artifact.
void write_file(const std::filesystem::path& path, std::string_view contents);

// Lines without trailing CR/LF. Blank lines and lines starting with '#' are
// skipped when `skip_comments` is set.
std::vector<std::string> read_lines(const std::filesystem::path& path,
                                    bool skip_comments = true);

std::string_view trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

// `key=value` text, '#' comments. Later keys override earlier ones.
std::map<std::string, std::string> parse_key_values(std::string_view text);

// FNV-1a, 64-bit. Used for content fingerprints only.
class Fnv1a {
 public:
  void update(std::string_view bytes);
  void update_u64(std::uint64_t v);
  void update_f64(double v);
  std::uint64_t digest() const { return state_; }

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

std::string hex64(std::uint64_t v);

}  // namespace agriqa
