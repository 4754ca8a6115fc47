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

#include <string>
#include <string_view>
#include <vector>

namespace agriqa::csv {

struct Row {
  std::vector<std::string> fields;
  // Set when the row violates RFC-4180 quoting (stray quote, text after a
  // closing quote, unterminated quoted field).
  bool malformed = false;
};

// Splits a whole document into rows. Accepts LF and CRLF line endings and a
// leading UTF-8 byte-order mark. Blank lines are dropped.
std::vector<Row> parse(std::string_view text);

// Quotes a field only when it contains a comma, quote, CR or LF.
std::string escape(std::string_view field);

std::string format_row(const std::vector<std::string>& fields);

}  // namespace agriqa::csv
