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

#include "ranking.hpp"

#include <algorithm>

#include "error.hpp"
#include "fileio.hpp"
#include "porter.hpp"

namespace agriqa {

namespace {

std::set<std::string> as_set(const std::vector<std::string>& tokens) {
  return {tokens.begin(), tokens.end()};
}

double overlap_ratio(const std::set<std::string>& known, const std::set<std::string>& predicted) {
  std::size_t common = 0;
  for (const auto& w : known) common += predicted.count(w);
  return static_cast<double>(common) / static_cast<double>(known.size() + 1);
}

}  // namespace

void GlossLexicon::add(const std::string& word, std::string_view gloss, const StopwordSet& stopwords) {
  auto words = tokenize_words(word);
  if (words.size() != 1) fail(ErrorKind::kParse, "gloss key must be a single word: '" + word + "'");
  const std::string& key = words.front();
  auto& bag = glosses_[key];
  for (auto& w : remove_stopwords(tokenize_words(gloss), stopwords)) {
    if (std::find(bag.begin(), bag.end(), w) == bag.end()) bag.push_back(std::move(w));
  }
  const std::string s = porter_stem(key);
  auto [it, inserted] = by_stem_.emplace(s, key);
  if (!inserted && key < it->second) it->second = key;
}

const std::vector<std::string>* GlossLexicon::gloss_words(const std::string& token) const {
  if (auto it = glosses_.find(token); it != glosses_.end()) return &it->second;
  if (auto s = by_stem_.find(token); s != by_stem_.end()) return &glosses_.at(s->second);
  return nullptr;
}

GlossLexicon GlossLexicon::parse(std::string_view text, const StopwordSet& stopwords) {
  GlossLexicon lex;
  std::size_t line_no = 0;
  for (const auto& raw : split(text, '\n')) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos) {
      fail(ErrorKind::kParse, "gloss line " + std::to_string(line_no) + ": expected word<TAB>gloss");
    }
    lex.add(std::string(trim(line.substr(0, tab))), line.substr(tab + 1), stopwords);
  }
  return lex;
}

GlossLexicon GlossLexicon::load(const std::filesystem::path& path, const StopwordSet& stopwords) {
  return parse(read_file(path), stopwords);
}

std::set<std::string> gloss_bag(const std::vector<std::string>& tokens, const GlossLexicon& lexicon) {
  std::set<std::string> bag;
  for (const auto& t : tokens) {
    bag.insert(t);
    if (const auto* g = lexicon.gloss_words(t)) bag.insert(g->begin(), g->end());
  }
  return bag;
}

double modified_jaccard(const std::vector<std::string>& known, const std::vector<std::string>& predicted) {
  return overlap_ratio(as_set(known), as_set(predicted));
}

double modified_lesk(const std::vector<std::string>& known, const std::vector<std::string>& predicted,
                     const GlossLexicon& lexicon) {
  return overlap_ratio(gloss_bag(known, lexicon), gloss_bag(predicted, lexicon));
}

std::string_view metric_name(Metric m) { return m == Metric::kLesk ? "lesk" : "jaccard"; }

Metric parse_metric(std::string_view name) {
  if (name == "lesk") return Metric::kLesk;
  if (name == "jaccard") return Metric::kJaccard;
  fail(ErrorKind::kInvalidArgument, "unknown metric '" + std::string(name) + "' (expected lesk or jaccard)");
}

double score(Metric m, const std::vector<std::string>& known, const std::vector<std::string>& predicted,
             const GlossLexicon& lexicon) {
  return m == Metric::kLesk ? modified_lesk(known, predicted, lexicon) : modified_jaccard(known, predicted);
}

ScoredAnswer rank_answers(const std::vector<std::string>& query_tokens,
                          const std::vector<std::string>& answers, const Normalizer& normalizer,
                          const GlossLexicon& lexicon) {
  if (answers.empty()) fail(ErrorKind::kInvalidArgument, "rank_answers needs at least one answer");
  const auto known = gloss_bag(query_tokens, lexicon);
  ScoredAnswer best{answers.front(), -1.0, 0};
  for (std::size_t i = 0; i < answers.size(); ++i) {
    const double s = overlap_ratio(known, gloss_bag(normalizer.normalize_words(answers[i]), lexicon));
    if (s > best.score) best = ScoredAnswer{answers[i], s, i};
  }
  return best;
}

}  // namespace agriqa
