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

#include "corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "csv.hpp"
#include "error.hpp"
#include "fileio.hpp"
#include "rng.hpp"

namespace agriqa {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string fmt_fraction(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

std::string_view season_label(Season s) {
  switch (s) {
    case Season::kKharif: return "kharif";
    case Season::kRabi: return "rabi";
    case Season::kZaid: return "zaid";
    case Season::kUnknown: break;
  }
  return "unknown";
}

Season parse_season(std::string_view text) {
  const std::string s = lower(trim(text));
  if (s == "kharif") return Season::kKharif;
  if (s == "rabi") return Season::kRabi;
  if (s == "zaid" || s == "jayad" || s == "zayad") return Season::kZaid;
  return Season::kUnknown;
}

// --- CSV -------------------------------------------------------------------

ColumnAliases parse_column_aliases(std::string_view text) {
  ColumnAliases aliases;
  for (const auto& [key, value] : parse_key_values(text)) {
    if (key != kIgnoredColumn &&
        std::find(std::begin(kCsvColumns), std::end(kCsvColumns), key) == std::end(kCsvColumns)) {
      fail(ErrorKind::kParse, "column map: unknown canonical column '" + key + "'");
    }
    for (const auto& alias : split(value, ',')) {
      const auto a = trim(alias);
      if (!a.empty()) aliases[key].emplace_back(a);
    }
  }
  return aliases;
}

CsvParseResult parse_csv(std::string_view bytes, const ColumnAliases& aliases) {
  CsvParseResult result;
  auto rows = csv::parse(bytes);
  if (rows.empty()) {
    ++result.warnings;
    return result;
  }

  const auto& header = rows.front();
  if (header.malformed) fail(ErrorKind::kParse, "malformed CSV header");

  std::unordered_map<std::string, std::string> alias_to_column;
  for (const auto& [column, names] : aliases) {
    for (const auto& n : names) alias_to_column[lower(n)] = column;
  }

  constexpr std::size_t kColumns = std::size(kCsvColumns);
  std::vector<int> position(kColumns, -1);
  for (std::size_t i = 0; i < header.fields.size(); ++i) {
    const std::string cell(trim(header.fields[i]));
    std::string column;
    if (std::find(std::begin(kCsvColumns), std::end(kCsvColumns), cell) != std::end(kCsvColumns)) {
      column = cell;
    } else if (auto it = alias_to_column.find(lower(cell)); it != alias_to_column.end()) {
      column = it->second;
      if (column == kIgnoredColumn) continue;
    } else {
      fail(ErrorKind::kParse, "unknown CSV column '" + cell + "'");
    }
    const auto idx = static_cast<std::size_t>(
        std::find(std::begin(kCsvColumns), std::end(kCsvColumns), column) - std::begin(kCsvColumns));
    if (position[idx] != -1) fail(ErrorKind::kParse, "duplicate CSV column '" + column + "'");
    position[idx] = static_cast<int>(i);
  }
  for (std::size_t c = 0; c < kColumns; ++c) {
    if (position[c] == -1) fail(ErrorKind::kParse, "missing CSV column '" + std::string(kCsvColumns[c]) + "'");
  }

  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.malformed || row.fields.size() != header.fields.size()) {
      ++result.skipped;
      continue;
    }
    auto field = [&](std::size_t c) -> const std::string& {
      return row.fields[static_cast<std::size_t>(position[c])];
    };
    QaRecord rec;
    rec.query_id = field(0);
    rec.question = field(1);
    rec.query_type = field(2);
    rec.created_on = field(3);
    rec.state = field(4);
    rec.district = field(5);
    rec.season = parse_season(field(6));
    rec.answer = field(7);
    if (trim(rec.question).empty()) {
      ++result.skipped;
      continue;
    }
    result.records.push_back(std::move(rec));
  }
  return result;
}

std::string serialize_csv(const std::vector<QaRecord>& records) {
  std::string out = csv::format_row(std::vector<std::string>(std::begin(kCsvColumns), std::end(kCsvColumns)));
  for (const auto& r : records) {
    out += csv::format_row({r.query_id, r.question, r.query_type, r.created_on, r.state,
                            r.district, std::string(season_label(r.season)), r.answer});
  }
  return out;
}

// --- filters ---------------------------------------------------------------

double ascii_fraction(std::string_view text) {
  std::size_t total = 0;
  std::size_t ascii = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    const auto c = static_cast<unsigned char>(text[i]);
    std::size_t len = 1;
    if (c < 0x80) {
      ++ascii;
    } else if ((c & 0xE0) == 0xC0) {
      len = 2;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
    }
    // Truncated or invalid sequences consume a single byte.
    if (len > 1) {
      bool ok = i + len <= text.size();
      for (std::size_t k = 1; ok && k < len; ++k) {
        ok = (static_cast<unsigned char>(text[i + k]) & 0xC0) == 0x80;
      }
      if (!ok) len = 1;
    }
    ++total;
    i += len;
  }
  return total == 0 ? 1.0 : static_cast<double>(ascii) / static_cast<double>(total);
}

EnglishFilterResult filter_english(std::vector<QaRecord> records, double threshold) {
  EnglishFilterResult result;
  for (auto& r : records) {
    if (ascii_fraction(r.question) >= threshold) {
      result.kept.push_back(std::move(r));
    } else {
      ++result.dropped;
    }
  }
  return result;
}

bool is_weather_question(std::string_view question, const Normalizer* normalizer) {
  const auto words = normalizer ? normalizer->normalize_words(question) : tokenize_words(question);
  return std::find(words.begin(), words.end(), "weather") != words.end();
}

bool is_weather(const QaRecord& record, const Normalizer* normalizer) {
  return lower(trim(record.query_type)) == "weather" || is_weather_question(record.question, normalizer);
}

WeatherSplit filter_weather(std::vector<QaRecord> records, const Normalizer* normalizer) {
  WeatherSplit split;
  for (auto& r : records) {
    if (is_weather(r, normalizer)) {
      split.weather.push_back(std::move(r));
    } else {
      split.rest.push_back(std::move(r));
    }
  }
  return split;
}

// --- grouping --------------------------------------------------------------

std::vector<std::string> CanonicalEntry::tokens() const {
  if (canonical_question.empty()) return {};
  return split(canonical_question, ' ');
}

std::vector<CanonicalEntry> group_answers(const std::vector<QaRecord>& records,
                                          const Normalizer& normalizer, GroupStats* stats) {
  GroupStats local;
  std::vector<CanonicalEntry> entries;
  std::unordered_map<std::string, std::size_t> by_key;

  for (const auto& r : records) {
    const std::string key = normalizer.normalize(r.question).joined();
    if (key.empty()) {
      ++local.empty_questions;
      continue;
    }
    auto [it, inserted] = by_key.emplace(key, entries.size());
    if (inserted) {
      CanonicalEntry e;
      e.canonical_question = key;
      e.query_type = r.query_type;
      entries.push_back(std::move(e));
    }
    auto& e = entries[it->second];
    if (std::find(e.raw_questions.begin(), e.raw_questions.end(), r.question) == e.raw_questions.end()) {
      e.raw_questions.push_back(r.question);
    }
    const std::string answer(trim(r.answer));
    if (answer.empty()) {
      ++local.empty_answers;
    } else if (std::find(e.answers.begin(), e.answers.end(), answer) == e.answers.end()) {
      e.answers.push_back(answer);
    }
    if (!r.state.empty()) ++e.states[r.state];
    ++e.seasons[std::string(season_label(r.season))];
  }

  // An entry needs at least one answer.
  std::erase_if(entries, [](const CanonicalEntry& e) { return e.answers.empty(); });
  for (std::size_t i = 0; i < entries.size(); ++i) entries[i].entry_id = static_cast<std::int64_t>(i);
  if (stats) *stats = local;
  return entries;
}

CorpusSplit split_train_test(const std::vector<CanonicalEntry>& entries, double ratio,
                             std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio < 1.0)) fail(ErrorKind::kInvalidArgument, "split ratio must be in (0, 1)");
  if (entries.size() < 2) fail(ErrorKind::kInvalidArgument, "need at least 2 entries to split");

  std::vector<std::size_t> order(entries.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::mt19937_64 rng(seed);
  for (std::size_t i = order.size() - 1; i > 0; --i) {
    std::swap(order[i], order[uniform_below(rng, i + 1)]);
  }
  const auto n_train = static_cast<std::size_t>(std::floor(ratio * static_cast<double>(entries.size())));

  CorpusSplit split;
  split.seed = seed;
  split.ratio = ratio;
  for (std::size_t i = 0; i < order.size(); ++i) {
    (i < n_train ? split.train : split.test).push_back(entries[order[i]]);
  }
  return split;
}

// --- JSONL -----------------------------------------------------------------

std::string serialize_entries(const std::vector<CanonicalEntry>& entries) {
  std::string out;
  for (const auto& e : entries) {
    ordered_json j;
    j["entry_id"] = e.entry_id;
    j["canonical_question"] = e.canonical_question;
    j["raw_questions"] = e.raw_questions;
    j["answers"] = e.answers;
    j["query_type"] = e.query_type;
    j["states"] = e.states;
    j["seasons"] = e.seasons;
    out += j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
    out += '\n';
  }
  return out;
}

std::vector<CanonicalEntry> parse_entries(std::string_view text) {
  std::vector<CanonicalEntry> entries;
  int line_no = 0;
  for (const auto& line : split(text, '\n')) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      CanonicalEntry e;
      e.entry_id = j.at("entry_id").get<std::int64_t>();
      e.canonical_question = j.at("canonical_question").get<std::string>();
      e.raw_questions = j.at("raw_questions").get<std::vector<std::string>>();
      e.answers = j.at("answers").get<std::vector<std::string>>();
      e.query_type = j.value("query_type", std::string());
      e.states = j.value("states", std::map<std::string, std::int64_t>{});
      e.seasons = j.value("seasons", std::map<std::string, std::int64_t>{});
      if (e.answers.empty()) fail(ErrorKind::kParse, "entry without answers");
      entries.push_back(std::move(e));
    } catch (const nlohmann::json::exception& ex) {
      fail(ErrorKind::kParse, "corpus line " + std::to_string(line_no) + ": " + ex.what());
    } catch (const Error& ex) {
      fail(ErrorKind::kParse, "corpus line " + std::to_string(line_no) + ": " + ex.what());
    }
  }
  return entries;
}

std::vector<CanonicalEntry> load_entries(const std::filesystem::path& path) {
  return parse_entries(read_file(path));
}

// --- stats -----------------------------------------------------------------

StatsReport corpus_stats(const std::vector<QaRecord>& records,
                         const std::vector<std::string>& crops) {
  StatsReport report;
  report.total = records.size();
  if (records.empty()) return report;

  std::map<std::string, std::int64_t> seasons;
  std::map<std::string, std::int64_t> types;
  std::unordered_set<std::string> distinct;
  std::vector<std::vector<std::string>> crop_tokens;
  for (const auto& c : crops) crop_tokens.push_back(tokenize_words(c));

  for (const auto& r : records) {
    ++report.state_counts[std::string(trim(r.state))];
    ++seasons[std::string(season_label(r.season))];
    ++types[lower(trim(r.query_type))];
    const auto words = tokenize_words(r.question);
    distinct.insert(join(words, " "));
    for (std::size_t c = 0; c < crops.size(); ++c) {
      const auto& needle = crop_tokens[c];
      if (needle.empty()) continue;
      if (std::search(words.begin(), words.end(), needle.begin(), needle.end()) != words.end()) {
        ++report.crop_counts[crops[c]];
      }
    }
  }

  const auto total = static_cast<double>(records.size());
  for (const auto& [k, v] : report.state_counts) report.state_fractions[k] = static_cast<double>(v) / total;
  for (const auto& [k, v] : seasons) report.season_fractions[k] = static_cast<double>(v) / total;
  for (const auto& [k, v] : types) report.query_type_fractions[k] = static_cast<double>(v) / total;
  report.duplicate_rate = 1.0 - static_cast<double>(distinct.size()) / total;
  return report;
}

std::string format_stats(const StatsReport& report) {
  std::string out;
  out += "total=" + std::to_string(report.total) + "\n";
  out += "duplicate_rate=" + fmt_fraction(report.duplicate_rate) + "\n";
  for (const auto& [k, v] : report.state_counts) {
    out += "state." + k + ".count=" + std::to_string(v) + "\n";
    out += "state." + k + ".fraction=" + fmt_fraction(report.state_fractions.at(k)) + "\n";
  }
  for (const auto& [k, v] : report.season_fractions) out += "season." + k + "=" + fmt_fraction(v) + "\n";
  for (const auto& [k, v] : report.query_type_fractions) out += "query_type." + k + "=" + fmt_fraction(v) + "\n";
  for (const auto& [k, v] : report.crop_counts) out += "crop." + k + "=" + std::to_string(v) + "\n";
  return out;
}

}  // namespace agriqa
