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

// Overlap metrics between a known sentence and a predicted one, and
// argmax answer selection.

#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "textprep.hpp"

namespace agriqa {

// word -> gloss text (all senses pooled).
class GlossLexicon {
 public:
  GlossLexicon() = default;

  // Gloss words are tokenized and stopword-filtered here, never stemmed.
  void add(const std::string& word, std::string_view gloss, const StopwordSet& stopwords);

  /// Lookup by exact key, then by Porter stem of a key, so normalized
  /// question tokens still find the gloss of their surface word. Returns
  /// nullptr when neither matches.
  const std::vector<std::string>* gloss_words(const std::string& token) const;

  std::size_t size() const { return glosses_.size(); }

  // Format: word<TAB>gloss text. Keys are lowercased.
  static GlossLexicon parse(std::string_view text, const StopwordSet& stopwords);
  static GlossLexicon load(const std::filesystem::path& path, const StopwordSet& stopwords);

 private:
  std::unordered_map<std::string, std::vector<std::string>> glosses_;
  std::unordered_map<std::string, std::string> by_stem_;  // stem -> smallest key
};

/// Union over tokens of {token} and the token's gloss words.
std::set<std::string> gloss_bag(const std::vector<std::string>& tokens, const GlossLexicon& lexicon);

/// |K n P| / (|K| + 1) over unique tokens. Not symmetric.
double modified_jaccard(const std::vector<std::string>& known, const std::vector<std::string>& predicted);

/// Same ratio over gloss bags.
double modified_lesk(const std::vector<std::string>& known, const std::vector<std::string>& predicted,
                     const GlossLexicon& lexicon);

enum class Metric { kLesk, kJaccard };

std::string_view metric_name(Metric m);
// "lesk" or "jaccard"; throws kInvalidArgument otherwise.
Metric parse_metric(std::string_view name);

double score(Metric m, const std::vector<std::string>& known, const std::vector<std::string>& predicted,
             const GlossLexicon& lexicon);

struct ScoredAnswer {
  std::string answer;
  double score = 0.0;
  std::size_t position = 0;
};

/// Argmax of modified_lesk(query, normalize(answer_i)); the earliest answer
/// wins ties. Throws on an empty list.
ScoredAnswer rank_answers(const std::vector<std::string>& query_tokens,
                          const std::vector<std::string>& answers, const Normalizer& normalizer,
                          const GlossLexicon& lexicon);

}  // namespace agriqa
