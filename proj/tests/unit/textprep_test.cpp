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

#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <random>

#include "corpus.hpp"
#include "fileio.hpp"
#include "pipeline.hpp"
#include "porter.hpp"
#include "toy_fixture.hpp"

namespace agriqa {
namespace {

std::vector<std::string> words(const std::vector<Token>& tokens) {
  std::vector<std::string> out;
  for (const auto& t : tokens) out.push_back(t.surface);
  return out;
}

// Unrestricted Damerau-Levenshtein distance (Lowrance-Wagner).
int damerau(const std::string& a, const std::string& b) {
  const int n = static_cast<int>(a.size()), m = static_cast<int>(b.size());
  const int inf = n + m;
  std::vector<std::vector<int>> d(n + 2, std::vector<int>(m + 2, 0));
  std::array<int, 256> last_row{};
  d[0][0] = inf;
  for (int i = 0; i <= n; ++i) {
    d[i + 1][0] = inf;
    d[i + 1][1] = i;
  }
  for (int j = 0; j <= m; ++j) {
    d[0][j + 1] = inf;
    d[1][j + 1] = j;
  }
  for (int i = 1; i <= n; ++i) {
    int last_col = 0;
    for (int j = 1; j <= m; ++j) {
      const int i1 = last_row[static_cast<unsigned char>(b[j - 1])];
      const int j1 = last_col;
      const int cost = a[i - 1] == b[j - 1] ? 0 : 1;
      if (cost == 0) last_col = j;
      d[i + 1][j + 1] = std::min({d[i][j] + cost, d[i + 1][j] + 1, d[i][j + 1] + 1,
                                  d[i1][j1] + (i - i1 - 1) + 1 + (j - j1 - 1)});
    }
    last_row[static_cast<unsigned char>(a[i - 1])] = i;
  }
  return d[n + 1][m + 1];
}

std::string oracle_correct(const std::string& token, const SpellDictionary& dict) {
  if (dict.contains(token)) return token;
  for (int dist = 1; dist <= 2; ++dist) {
    std::string best;
    std::int64_t best_count = 0;
    for (const auto& [w, c] : dict.counts()) {
      if (damerau(token, w) != dist) continue;
      if (c > best_count) {  // counts() iterates in lexicographic order
        best = w;
        best_count = c;
      }
    }
    if (best_count > 0) return best;
  }
  return token;
}

SpellDictionary toy_dictionary() { return test_support::bundled_normalizer().lexicons().dictionary; }

using test_support::bundled_normalizer;

TEST(Tokenize, SplitsOnNonAlphanumericRuns) {
  EXPECT_EQ(words(tokenize("What is the market rate of wheat?")),
            (std::vector<std::string>{"what", "is", "the", "market", "rate", "of", "wheat"}));
  EXPECT_TRUE(tokenize("").empty());
  EXPECT_EQ(words(tokenize("30ml/15 l water")), (std::vector<std::string>{"30ml", "15", "l", "water"}));
}

TEST(Tokenize, PositionsAndNonLatinBytes) {
  const auto t = tokenize("  Urea,  DAP ");
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t[0].position, 0);
  EXPECT_EQ(t[1].position, 1);
  EXPECT_TRUE(tokenize("गेहूं का भाव").empty());
}

TEST(Stopwords, BundledListFiltersQuestionWords) {
  const auto stop = load_stopwords(LexiconPaths::in(default_lexicon_dir()).stopwords);
  EXPECT_EQ(remove_stopwords({"what", "is", "the", "market", "rate", "of", "wheat"}, stop),
            (std::vector<std::string>{"market", "rate", "wheat"}));
  EXPECT_TRUE(remove_stopwords({}, stop).empty());
  const std::vector<std::string> plain = {"urea", "dose", "paddy"};
  EXPECT_EQ(remove_stopwords(plain, stop), plain);
}

TEST(SpellCorrect, Examples) {
  EXPECT_EQ(spell_correct("wheat", SpellDictionary({{"wheat", 10}})), "wheat");
  EXPECT_EQ(spell_correct("whaet", SpellDictionary({{"wheat", 10}})), "wheat");
  // Edit distance 1 beats a more frequent edit-distance-2 word.
  ASSERT_EQ(damerau("grem", "gram"), 1);
  ASSERT_EQ(damerau("grem", "green"), 2);
  EXPECT_EQ(spell_correct("grem", SpellDictionary({{"gram", 5}, {"green", 7}})), "gram");
}

TEST(SpellCorrect, TiesPickSmallestWord) {
  EXPECT_EQ(spell_correct("bat", SpellDictionary({{"cat", 3}, {"bet", 3}})), "bet");
  EXPECT_EQ(spell_correct("zzzzzz", SpellDictionary({{"cat", 3}})), "zzzzzz");
}

TEST(SpellCorrect, MatchesDamerauOracleOnPerturbedWords) {
  const auto dict = toy_dictionary();
  std::vector<std::string> vocab;
  for (const auto& [w, c] : dict.counts()) vocab.push_back(w);
  std::mt19937_64 rng(42);
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  for (int trial = 0; trial < 400; ++trial) {
    std::string w = vocab[pick(vocab.size())];
    const int edits = 1 + static_cast<int>(pick(3));
    for (int e = 0; e < edits && !w.empty(); ++e) {
      const char c = static_cast<char>('a' + pick(26));
      switch (pick(4)) {
        case 0: w.erase(pick(w.size()), 1); break;
        case 1: w.insert(w.begin() + static_cast<std::ptrdiff_t>(pick(w.size() + 1)), c); break;
        case 2: w[pick(w.size())] = c; break;
        default:
          if (w.size() > 1) {
            const auto i = pick(w.size() - 1);
            std::swap(w[i], w[i + 1]);
          }
      }
    }
    if (w.empty()) continue;
    const auto got = spell_correct(w, dict);
    EXPECT_EQ(got, oracle_correct(w, dict)) << w;
    EXPECT_TRUE(got == w || dict.contains(got)) << w;
  }
}

TEST(Synonyms, DirectLookupAndFixedPoints) {
  SynonymMap map;
  map.add("rate", "price");
  const std::vector<std::string> in = {"price", "of", "wheat"};
  const auto once = canonicalize_synonyms(in, map);
  EXPECT_EQ(once, (std::vector<std::string>{"rate", "of", "wheat"}));
  EXPECT_EQ(canonicalize_synonyms(once, map), once);
  EXPECT_EQ(map.map("rate"), "rate");
  EXPECT_EQ(canonicalize_synonyms(in, SynonymMap{}), in);
}

TEST(Synonyms, ParsesTabFormat) {
  const auto map = SynonymMap::parse("# comment\npaddy\trice, dhan\nmaize\tcorn\n");
  EXPECT_EQ(map.map("dhan"), "paddy");
  EXPECT_EQ(map.map("corn"), "maize");
  EXPECT_EQ(map.map("wheat"), "wheat");
}

TEST(Normalize, Examples) {
  const auto n = bundled_normalizer();
  EXPECT_EQ(n.normalize_words("What is the market rate of wheat?"),
            (std::vector<std::string>{"market", "rate", "wheat"}));
  EXPECT_EQ(n.normalize_words("what is the market rate of wheat?"), n.normalize_words("market rate of WHEAT!!"));
  EXPECT_TRUE(n.normalize("").tokens.empty());
}

TEST(Normalize, SynonymVariantsAreCanonicalizedNotCorrected) {
  const auto n = bundled_normalizer();
  EXPECT_EQ(n.normalize_words("dhan market rate"), n.normalize_words("paddy market rate"));
  EXPECT_EQ(n.normalize_words("bhindi seed variety"), n.normalize_words("okra seed variety"));
}

TEST(Normalize, DigitsSkipCorrectionAndStemming) {
  ASSERT_NE(porter_stem("30kgs"), "30kgs");
  const Normalizer n(TextLexicons{{}, {}, SpellDictionary({{"spray", 1}, {"water", 1}, {"kgs", 1}})});
  EXPECT_EQ(n.normalize_words("spray 30kgs water 15"), (std::vector<std::string>{porter_stem("spray"), "30kgs", "water", "15"}));
}

// A misspelling that only the unstemmed dictionary word can repair.
TEST(Normalize, CorrectionRunsBeforeStemming) {
  ASSERT_NE(porter_stem("fertilzers"), porter_stem("fertilizers"));
  const Normalizer n(TextLexicons{{}, {}, SpellDictionary({{"fertilizers", 3}})});
  EXPECT_EQ(n.normalize_words("fertilzers"), (std::vector<std::string>{"fertil"}));
}

TEST(Normalize, IdempotentOnToyCorpus) {
  const auto n = bundled_normalizer();
  for (const auto& r : test_support::toy_records()) {
    for (const auto* text : {&r.question, &r.answer}) {
      const auto once = n.normalize(*text);
      const auto twice = n.normalize(once.joined());
      EXPECT_EQ(once.words(), twice.words()) << *text;
      for (const auto& t : once.tokens) {
        EXPECT_FALSE(t.surface.empty());
        EXPECT_TRUE(std::none_of(t.surface.begin(), t.surface.end(),
                                 [](unsigned char c) { return std::isupper(c) || std::isspace(c); }))
            << t.surface;
      }
    }
  }
}

TEST(SpellDictionary, BuildRulesAndRoundTrip) {
  const auto dict = build_spell_dictionary({{"urea", "urea", "dap", "30ml", "30ml"}}, {"wheat"}, {"the"}, 2);
  EXPECT_EQ(dict.count("urea"), 2);
  EXPECT_FALSE(dict.contains("dap"));
  EXPECT_FALSE(dict.contains("30ml"));
  EXPECT_EQ(dict.count("wheat"), 1);
  EXPECT_EQ(dict.count("the"), 1);

  test_support::TempDir tmp;
  write_file(tmp / "spell.tsv", dict.serialize());
  EXPECT_EQ(SpellDictionary::load(tmp / "spell.tsv").counts(), dict.counts());
}

}  // namespace
}  // namespace agriqa
