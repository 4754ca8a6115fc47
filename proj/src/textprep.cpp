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

#include "textprep.hpp"

#include <algorithm>
#include <charconv>
#include <mutex>

#include "error.hpp"
#include "fileio.hpp"
#include "porter.hpp"

namespace agriqa {

namespace {

bool is_alnum_ascii(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

char lower_ascii(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

constexpr std::string_view kAlphabet = "abcdefghijklmnopqrstuvwxyz";

template <typename Visit>
void for_each_edit1(const std::string& w, Visit&& visit) {
  const std::size_t n = w.size();
  std::string e;
  for (std::size_t i = 0; i < n; ++i) {  // deletes
    e = w;
    e.erase(i, 1);
    visit(e);
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {  // transposes
    e = w;
    std::swap(e[i], e[i + 1]);
    visit(e);
  }
  for (std::size_t i = 0; i < n; ++i) {  // replaces
    e = w;
    for (char c : kAlphabet) {
      e[i] = c;
      visit(e);
    }
  }
  for (std::size_t i = 0; i <= n; ++i) {  // inserts
    for (char c : kAlphabet) {
      e = w;
      e.insert(e.begin() + static_cast<std::ptrdiff_t>(i), c);
      visit(e);
    }
  }
}

struct Best {
  std::string word;
  std::int64_t count = 0;

  void offer(const std::string& candidate, std::int64_t c) {
    if (c > count || (c == count && count > 0 && candidate < word)) {
      word = candidate;
      count = c;
    }
  }
  bool found() const { return count > 0; }
};

}  // namespace

std::vector<std::string> NormalizedQuestion::words() const {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(t.surface);
  return out;
}

std::string NormalizedQuestion::joined() const { return join(words(), " "); }

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) {
      tokens.push_back(Token{std::move(current), static_cast<int>(tokens.size())});
      current.clear();
    }
  };
  for (char c : text) {
    if (is_alnum_ascii(static_cast<unsigned char>(c))) {
      current.push_back(lower_ascii(c));
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

std::vector<std::string> tokenize_words(std::string_view text) {
  std::vector<std::string> out;
  for (auto& t : tokenize(text)) out.push_back(std::move(t.surface));
  return out;
}

std::vector<std::string> remove_stopwords(const std::vector<std::string>& tokens,
                                          const StopwordSet& stopwords) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    if (!stopwords.contains(t)) out.push_back(t);
  }
  return out;
}

bool has_digit(std::string_view token) {
  return std::any_of(token.begin(), token.end(), [](char c) { return c >= '0' && c <= '9'; });
}

// --- SpellDictionary -------------------------------------------------------

SpellDictionary::SpellDictionary(std::map<std::string, std::int64_t> counts) {
  for (const auto& [w, c] : counts) add(w, c);
}

void SpellDictionary::add(const std::string& word, std::int64_t count) {
  if (word.empty() || count < 1) fail(ErrorKind::kInvalidArgument, "bad dictionary entry: '" + word + "'");
  ordered_[word] += count;
  counts_[word] += count;
}

void SpellDictionary::ensure(const std::string& word, std::int64_t count) {
  auto it = counts_.find(word);
  if (it == counts_.end()) {
    add(word, count);
  } else if (it->second < count) {
    it->second = count;
    ordered_[word] = count;
  }
}

bool SpellDictionary::contains(std::string_view word) const {
  return counts_.contains(std::string(word));
}

std::int64_t SpellDictionary::count(std::string_view word) const {
  auto it = counts_.find(std::string(word));
  return it == counts_.end() ? 0 : it->second;
}

SpellDictionary SpellDictionary::load(const std::filesystem::path& path) {
  SpellDictionary dict;
  for (const auto& line : read_lines(path)) {
    const auto tab = line.find('\t');
    if (tab == std::string::npos) fail(ErrorKind::kParse, path.string() + ": expected word<TAB>count");
    const std::string word(trim(std::string_view(line).substr(0, tab)));
    const auto count_text = trim(std::string_view(line).substr(tab + 1));
    std::int64_t count = 0;
    auto [ptr, ec] = std::from_chars(count_text.data(), count_text.data() + count_text.size(), count);
    if (ec != std::errc() || ptr != count_text.data() + count_text.size() || count < 1) {
      fail(ErrorKind::kParse, path.string() + ": bad count for '" + word + "'");
    }
    dict.add(word, count);
  }
  return dict;
}

std::string SpellDictionary::serialize() const {
  std::string out;
  for (const auto& [w, c] : ordered_) {
    out += w;
    out += '\t';
    out += std::to_string(c);
    out += '\n';
  }
  return out;
}

std::string spell_correct(const std::string& token, const SpellDictionary& dict) {
  if (token.empty() || dict.contains(token)) return token;

  Best best1;
  for_each_edit1(token, [&](const std::string& e) {
    if (const auto c = dict.count(e); c > 0) best1.offer(e, c);
  });
  if (best1.found()) return best1.word;

  std::unordered_set<std::string> first;
  for_each_edit1(token, [&](const std::string& e) { first.insert(e); });
  Best best2;
  for (const auto& e1 : first) {
    for_each_edit1(e1, [&](const std::string& e) {
      if (const auto c = dict.count(e); c > 0) best2.offer(e, c);
    });
  }
  return best2.found() ? best2.word : token;
}

// --- SynonymMap ------------------------------------------------------------

void SynonymMap::add(const std::string& canonical, const std::string& variant) {
  if (canonical.empty() || variant.empty() || canonical == variant) return;
  if (variants_.contains(canonical)) {
    fail(ErrorKind::kParse, "synonym '" + canonical + "' is both canonical and a variant");
  }
  for (const auto& [v, c] : variants_) {
    if (c == variant) fail(ErrorKind::kParse, "synonym '" + variant + "' is both canonical and a variant");
  }
  auto [it, inserted] = variants_.emplace(variant, canonical);
  if (!inserted && it->second != canonical) {
    fail(ErrorKind::kParse, "synonym variant '" + variant + "' maps to two canonical words");
  }
}

const std::string& SynonymMap::map(const std::string& token) const {
  auto it = variants_.find(token);
  return it == variants_.end() ? token : it->second;
}

SynonymMap SynonymMap::parse(std::string_view text) {
  SynonymMap m;
  int line_no = 0;
  for (const auto& raw : split(text, '\n')) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos) {
      fail(ErrorKind::kParse, "synonyms line " + std::to_string(line_no) + ": expected canonical<TAB>variants");
    }
    const auto canonical = tokenize_words(line.substr(0, tab));
    if (canonical.size() != 1) {
      fail(ErrorKind::kParse, "synonyms line " + std::to_string(line_no) + ": canonical must be one word");
    }
    for (const auto& v : split(line.substr(tab + 1), ',')) {
      const auto words = tokenize_words(v);
      if (words.empty()) continue;
      if (words.size() != 1) {
        fail(ErrorKind::kParse, "synonyms line " + std::to_string(line_no) + ": variant '" + v + "' must be one word");
      }
      m.add(canonical[0], words[0]);
    }
  }
  return m;
}

SynonymMap SynonymMap::load(const std::filesystem::path& path) { return parse(read_file(path)); }

std::vector<std::string> canonicalize_synonyms(const std::vector<std::string>& tokens,
                                               const SynonymMap& map) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(map.map(t));
  return out;
}

StopwordSet load_stopwords(const std::filesystem::path& path) {
  StopwordSet set;
  for (const auto& line : read_lines(path)) {
    for (auto& w : tokenize_words(line)) set.insert(std::move(w));
  }
  return set;
}

std::vector<std::string> load_crop_lexicon(const std::filesystem::path& path) {
  std::vector<std::string> crops;
  for (const auto& line : read_lines(path)) {
    const auto words = tokenize_words(line);
    if (!words.empty()) crops.push_back(join(words, " "));
  }
  return crops;
}

SpellDictionary build_spell_dictionary(const std::vector<std::vector<std::string>>& token_lists,
                                       const std::vector<std::string>& crops,
                                       const StopwordSet& stopwords,
                                       std::int64_t min_count) {
  std::map<std::string, std::int64_t> counts;
  for (const auto& tokens : token_lists) {
    for (const auto& t : tokens) {
      if (!has_digit(t)) ++counts[t];
    }
  }
  SpellDictionary dict;
  for (const auto& [w, c] : counts) {
    if (c >= min_count) dict.add(w, c);
  }
  for (const auto& crop : crops) {
    for (const auto& w : tokenize_words(crop)) {
      if (!has_digit(w)) dict.ensure(w, std::max<std::int64_t>(1, counts.contains(w) ? counts[w] : 1));
    }
  }
  for (const auto& w : stopwords) dict.ensure(w, 1);
  return dict;
}

// --- Normalizer ------------------------------------------------------------

Normalizer::Normalizer(TextLexicons lexicons) : lexicons_(std::move(lexicons)) {
  for (const auto& [w, c] : lexicons_.dictionary.counts()) {
    if (!has_digit(w)) normal_forms_.insert(porter_stem(w));
  }
  for (const auto& [variant, canonical] : lexicons_.synonyms.entries()) {
    normal_forms_.insert(porter_stem(canonical));
    synonym_words_.insert(variant);
    synonym_words_.insert(canonical);
  }
  for (const auto& [variant, canonical] : lexicons_.synonyms.entries()) {
    const std::string sv = stem(variant);
    const std::string sc = stem(canonical);
    if (sv != sc) stem_synonyms_.emplace(sv, sc);
  }
}

std::string Normalizer::correct(const std::string& token) const {
  if (has_digit(token) || lexicons_.dictionary.contains(token) || normal_forms_.contains(token) ||
      synonym_words_.contains(token)) {
    return token;
  }
  {
    std::lock_guard lock(cache_->mu);
    if (auto it = cache_->corrections.find(token); it != cache_->corrections.end()) return it->second;
  }
  std::string corrected = spell_correct(token, lexicons_.dictionary);
  std::lock_guard lock(cache_->mu);
  cache_->corrections.emplace(token, corrected);
  return corrected;
}

std::string Normalizer::stem(const std::string& token) const {
  if (has_digit(token) || normal_forms_.contains(token)) return token;
  return porter_stem(token);
}

std::optional<std::string> Normalizer::step(const std::string& token) const {
  const auto& stopwords = lexicons_.stopwords;
  std::string w = lexicons_.synonyms.map(correct(token));
  if (stopwords.contains(w)) return std::nullopt;
  w = stem(w);
  if (auto it = stem_synonyms_.find(w); it != stem_synonyms_.end()) w = it->second;
  if (w.empty() || stopwords.contains(w)) return std::nullopt;
  return w;
}

// Repeats `step` until the token stops changing. A stemmed word can be a
// fresh misspelling ("balanced" -> "balanc"), so one pass is not always a
// fixed point. A cycle resolves to its smallest member.
std::optional<std::string> Normalizer::normalize_token(const std::string& surface) const {
  std::vector<std::string> seen;
  std::string w = surface;
  for (;;) {
    auto next = step(w);
    if (!next) return std::nullopt;
    if (*next == w) return w;
    if (auto it = std::find(seen.begin(), seen.end(), *next); it != seen.end()) {
      return *std::min_element(it, seen.end());
    }
    seen.push_back(w = std::move(*next));
  }
}

NormalizedQuestion Normalizer::normalize(std::string_view text) const {
  NormalizedQuestion out;
  out.source = std::string(text);
  for (const auto& tok : tokenize(text)) {
    if (auto w = normalize_token(tok.surface)) out.tokens.push_back(Token{std::move(*w), tok.position});
  }
  return out;
}

std::vector<std::string> Normalizer::normalize_words(std::string_view text) const {
  return normalize(text).words();
}

}  // namespace agriqa
