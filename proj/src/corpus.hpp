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

// Call-centre corpus: CSV records, filters, canonical question grouping,
// train/test split and descriptive statistics.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "textprep.hpp"

namespace agriqa {

enum class Season { kKharif, kRabi, kZaid, kUnknown };

std::string_view season_label(Season s);
// Case-insensitive; "jayad"/"zayad" are accepted for zaid. Anything else is
// kUnknown.
Season parse_season(std::string_view text);

struct QaRecord {
  std::string query_id;
  std::string question;
  std::string query_type;
  std::string created_on;
  std::string state;
  std::string district;
  Season season = Season::kUnknown;
  std::string answer;

  friend bool operator==(const QaRecord&, const QaRecord&) = default;
};

inline constexpr std::string_view kCsvColumns[] = {
    "query_id", "query_text", "query_type", "created_on",
    "state",    "district",   "season",     "answer"};

// canonical column -> accepted header aliases (compared case-insensitively).
using ColumnAliases = std::map<std::string, std::vector<std::string>>;

// Pseudo-column for export columns that are deliberately dropped.
inline constexpr std::string_view kIgnoredColumn = "ignore";

// `canonical=alias1,alias2` lines, plus `ignore=colA,colB`.
ColumnAliases parse_column_aliases(std::string_view text);

struct CsvParseResult {
  std::vector<QaRecord> records;
  std::size_t skipped = 0;   // malformed rows or empty questions
  std::size_t warnings = 0;  // e.g. empty input
};

/// Throws Error(kParse) naming the column when a header cell is unknown or a
/// canonical column is missing.
CsvParseResult parse_csv(std::string_view bytes, const ColumnAliases& aliases = {});

std::string serialize_csv(const std::vector<QaRecord>& records);

struct EnglishFilterResult {
  std::vector<QaRecord> kept;
  std::size_t dropped = 0;
};

inline constexpr double kDefaultLatinFraction = 0.8;

/// Fraction of code points in the question that are ASCII. Invalid UTF-8
/// bytes count as one non-ASCII code point each.
double ascii_fraction(std::string_view text);

EnglishFilterResult filter_english(std::vector<QaRecord> records,
                                   double threshold = kDefaultLatinFraction);

struct WeatherSplit {
  std::vector<QaRecord> weather;
  std::vector<QaRecord> rest;
};

/// Weather iff query_type is "weather" (any case) or the question has the
/// token "weather". With a normalizer the token test runs on normalized
/// tokens, so misspellings are caught too.
bool is_weather(const QaRecord& record, const Normalizer* normalizer = nullptr);
bool is_weather_question(std::string_view question, const Normalizer* normalizer = nullptr);

WeatherSplit filter_weather(std::vector<QaRecord> records, const Normalizer* normalizer = nullptr);

struct CanonicalEntry {
  std::int64_t entry_id = 0;
  std::string canonical_question;  // normalized tokens joined by spaces
  std::vector<std::string> raw_questions;
  std::vector<std::string> answers;
  std::string query_type;
  std::map<std::string, std::int64_t> states;
  std::map<std::string, std::int64_t> seasons;

  std::vector<std::string> tokens() const;

  friend bool operator==(const CanonicalEntry&, const CanonicalEntry&) = default;
};

struct GroupStats {
  std::size_t empty_questions = 0;  // nothing left after normalization
  std::size_t empty_answers = 0;
};

/// Merges records whose normalized questions are identical. Entries keep
/// first-seen order and get dense ids from 0. Answers are trimmed and
/// deduplicated by exact equality, preserving first-seen order.
std::vector<CanonicalEntry> group_answers(const std::vector<QaRecord>& records,
                                          const Normalizer& normalizer,
                                          GroupStats* stats = nullptr);

struct CorpusSplit {
  std::vector<CanonicalEntry> train;
  std::vector<CanonicalEntry> test;
  std::uint64_t seed = 0;
  double ratio = 0.0;
};

/// Seeded Fisher-Yates shuffle, then the first floor(ratio * n) entries go
/// to train.
CorpusSplit split_train_test(const std::vector<CanonicalEntry>& entries, double ratio,
                             std::uint64_t seed);

// Line-delimited JSON, one entry per line.
std::string serialize_entries(const std::vector<CanonicalEntry>& entries);
std::vector<CanonicalEntry> parse_entries(std::string_view text);
std::vector<CanonicalEntry> load_entries(const std::filesystem::path& path);

struct StatsReport {
  std::size_t total = 0;
  std::map<std::string, std::int64_t> state_counts;
  std::map<std::string, double> state_fractions;
  std::map<std::string, double> season_fractions;
  std::map<std::string, double> query_type_fractions;
  std::map<std::string, std::int64_t> crop_counts;
  double duplicate_rate = 0.0;  // 1 - distinct questions / total
};

/// Query types are lowercased; duplicates are detected on lowercased
/// tokens. Crop names match as contiguous token sequences.
StatsReport corpus_stats(const std::vector<QaRecord>& records,
                         const std::vector<std::string>& crops);

std::string format_stats(const StatsReport& report);

}  // namespace agriqa
