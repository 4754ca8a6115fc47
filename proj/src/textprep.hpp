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

// Text normalization: tokenize, spell-correct, canonicalize synonyms, drop
// stopwords, stem. Every stage is pure given its lexicons.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace agriqa {

struct Token {
  std::string surface;
  int position = 0;  // index in the tokenizer output of the source text

  friend bool operator==(const Token&, const Token&) = default;
};

struct NormalizedQuestion {
  std::vector<Token> tokens;
  std::string source;

  std::vector<std::string> words() const;
  std::string joined() const;  // tokens separated by single spaces
};

using StopwordSet = std::unordered_set<std::string>;

/// Splits on maximal runs of non-alphanumeric bytes and lowercases ASCII.
/// Bytes outside ASCII are separators, so non-Latin scripts yield nothing.
std::vector<Token> tokenize(std::string_view text);

/// tokenize() without positions.
std::vector<std::string> tokenize_words(std::string_view text);

std::vector<std::string> remove_stopwords(const std::vector<std::string>& tokens,
                                          const StopwordSet& stopwords);

bool has_digit(std::string_view token);

// word -> corpus frequency. Keys are lowercase, counts >= 1.
class SpellDictionary {
 public:
  SpellDictionary() = default;
  explicit SpellDictionary(std::map<std::string, std::int64_t> counts);

  void add(const std::string& word, std::int64_t count = 1);
  // Raises the count of `word` to at least `count`.
  void ensure(const std::string& word, std::int64_t count = 1);

  bool contains(std::string_view word) const;
  std::int64_t count(std::string_view word) const;
  std::size_t size() const { return counts_.size(); }
  const std::map<std::string, std::int64_t>& counts() const { return ordered_; }

  static SpellDictionary load(const std::filesystem::path& path);
  std::string serialize() const;  // word<TAB>count lines, sorted by word

 private:
  std::map<std::string, std::int64_t> ordered_;
  std::unordered_map<std::string, std::int64_t> counts_;
};

/// Norvig's corrector: a known word is returned as is; otherwise the most
/// frequent dictionary word one edit away, then two edits away; otherwise
/// the input. Edits are deletes, adjacent transposes, replaces and inserts
/// over a-z. Equal counts resolve to the lexicographically smallest word.
std::string spell_correct(const std::string& token, const SpellDictionary& dict);

// variant -> canonical. Canonical words are fixed points.
class SynonymMap {
 public:
  SynonymMap() = default;

  void add(const std::string& canonical, const std::string& variant);
  const std::string& map(const std::string& token) const;
  bool empty() const { return variants_.empty(); }
  const std::map<std::string, std::string>& entries() const { return variants_; }

  // Format: canonical<TAB>variant1,variant2,...
  static SynonymMap load(const std::filesystem::path& path);
  static SynonymMap parse(std::string_view text);

 private:
  std::map<std::string, std::string> variants_;
};

std::vector<std::string> canonicalize_synonyms(const std::vector<std::string>& tokens,
                                               const SynonymMap& map);

StopwordSet load_stopwords(const std::filesystem::path& path);

// One crop name per line; multi-word names are allowed.
std::vector<std::string> load_crop_lexicon(const std::filesystem::path& path);

/// Dictionary of corpus token frequencies. Tokens seen fewer than
/// `min_count` times are left out; crop names and stopwords are always
/// present with a count of at least 1. Tokens containing digits are never
/// dictionary words.
SpellDictionary build_spell_dictionary(const std::vector<std::vector<std::string>>& token_lists,
                                       const std::vector<std::string>& crops,
                                       const StopwordSet& stopwords,
                                       std::int64_t min_count);

struct TextLexicons {
  StopwordSet stopwords;
  SynonymMap synonyms;
  SpellDictionary dictionary;
};

/// The full pipeline, in this order:
///   tokenize/lowercase -> spell-correct -> synonyms -> stopwords -> stem
/// Tokens with digits skip spell correction and stemming, and words in the
/// synonym map are never spell-corrected. Stems of
/// dictionary words ("normal forms") are treated as already normalized by
/// both the corrector and the stemmer, and synonym variants are also
/// canonicalized at the stem level. Each token is run through these stages
/// until it stops changing, so normalizing the space-joined output of
/// normalize() reproduces the same tokens.
class Normalizer {
 public:
  Normalizer() = default;
  explicit Normalizer(TextLexicons lexicons);

  NormalizedQuestion normalize(std::string_view text) const;
  std::vector<std::string> normalize_words(std::string_view text) const;

  // Single-token stages, exposed for tests and the gloss lexicon.
  std::string correct(const std::string& token) const;
  std::string stem(const std::string& token) const;

  bool is_normal_form(const std::string& token) const { return normal_forms_.contains(token); }
  const TextLexicons& lexicons() const { return lexicons_; }

 private:
  std::optional<std::string> step(const std::string& token) const;
  std::optional<std::string> normalize_token(const std::string& surface) const;

  TextLexicons lexicons_;
  std::unordered_set<std::string> normal_forms_;
  std::unordered_set<std::string> synonym_words_;  // variants and canonicals; never spell-corrected
  std::unordered_map<std::string, std::string> stem_synonyms_;

  // Memo for out-of-dictionary corrections; shared between copies.
  struct CorrectionCache {
    std::mutex mu;
    std::unordered_map<std::string, std::string> corrections;
  };
  std::shared_ptr<CorrectionCache> cache_ = std::make_shared<CorrectionCache>();
};

}  // namespace agriqa
