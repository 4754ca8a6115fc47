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

#include "pipeline.hpp"

#include <gtest/gtest.h>

#include "error.hpp"
#include "fileio.hpp"
#include "toy_fixture.hpp"

namespace agriqa {
namespace {

using test_support::TempDir;

TEST(Paths, CorpusBaseAndIndexFile) {
  EXPECT_EQ(corpus_base("out/corpus.jsonl"), fs::path("out/corpus"));
  EXPECT_EQ(corpus_base("out/corpus.train.jsonl"), fs::path("out/corpus"));
  EXPECT_EQ(corpus_base("out/corpus.test.jsonl"), fs::path("out/corpus"));
  TempDir tmp;
  EXPECT_EQ(index_file(tmp.path()), tmp.path() / "index.bin");
  EXPECT_EQ(index_file(tmp / "other.bin"), tmp / "other.bin");
}

TEST(Ingest, WritesSplitAndSpellFiles) {
  TempDir tmp;
  IngestOptions o;
  o.input = test_support::toy_csv();
  o.out = tmp / "c.jsonl";
  const auto s = run_ingest(o);
  EXPECT_EQ(s.train + s.test, s.entries);
  EXPECT_EQ(s.train, static_cast<std::size_t>(0.8 * static_cast<double>(s.entries)));
  EXPECT_GT(s.dropped_non_english, 0u);
  EXPECT_GT(s.weather, 0u);
  EXPECT_EQ(load_entries(o.out).size(), s.entries);
  EXPECT_TRUE(fs::exists(tmp / "c.spell.tsv"));

  TempDir again;
  o.out = again / "c.jsonl";
  run_ingest(o);
  EXPECT_EQ(read_file(again / "c.train.jsonl"), read_file(tmp / "c.train.jsonl"));
}

TEST(Ingest, RejectsMissingInput) {
  TempDir tmp;
  IngestOptions o;
  o.input = tmp / "nothing";
  o.out = tmp / "c.jsonl";
  EXPECT_THROW(run_ingest(o), Error);
}

TEST(Model, LoadsAndDetectsTampering) {
  TempDir tmp;
  const auto art = test_support::build_toy(tmp.path());
  const auto m = load_model(art.model);
  EXPECT_EQ(m.table.dim, 75);
  EXPECT_EQ(m.sif.boost, 3.0);
  EXPECT_GT(m.gloss.size(), 0u);
  EXPECT_EQ(read_index_meta(art.index)->model_fingerprint, m.fingerprint);

  auto side = read_file(art.model / "model.txt");
  const auto pos = side.find("boost=");
  ASSERT_NE(pos, std::string::npos);
  side.replace(pos, side.find('\n', pos) - pos, "boost=2");
  write_file(art.model / "model.txt", side);
  try {
    load_model(art.model);
    FAIL() << "expected a fingerprint mismatch";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kModel);
  }
}

TEST(Model, TrainingIsReproducible) {
  TempDir a, b;
  const auto x = test_support::build_toy(a.path());
  const auto y = test_support::build_toy(b.path());
  EXPECT_EQ(read_file(x.model / "vectors.txt"), read_file(y.model / "vectors.txt"));
  EXPECT_EQ(read_file(x.index / "index.bin"), read_file(y.index / "index.bin"));
}

TEST(Eval, ThresholdPrecedence) {
  const auto& env = test_support::toy_env();
  EvalOptions o;
  o.index = env.artifacts.index;
  o.test = env.artifacts.test;
  o.metrics = {Metric::kLesk};
  EXPECT_NE(run_eval(o).find("lesk.threshold=0.500000"), std::string::npos);
  o.labels = test_support::toy_labels();
  const auto calibrated = run_eval(o);
  EXPECT_EQ(calibrated.find("lesk.threshold=0.500000"), std::string::npos);
  o.threshold = 0.25;
  EXPECT_NE(run_eval(o).find("lesk.threshold=0.250000"), std::string::npos);
}

TEST(Stats, ReportsToyCorpus) {
  StatsOptions o;
  o.input = test_support::toy_csv();
  const auto text = run_stats(o);
  EXPECT_NE(text.find("duplicate_rate="), std::string::npos);
  EXPECT_NE(text.find("crop.wheat="), std::string::npos);
}

TEST(Pending, RoundTripAndMissingFile) {
  TempDir tmp;
  EXPECT_TRUE(load_pending(tmp / "none.jsonl").empty());
  PendingPair p{"what is \"neem\" oil", "use 5 ml/l", "PUNJAB", "", "Plant Protection"};
  write_file(tmp / "p.jsonl", serialize_pending(p) + "\n" + serialize_pending(p));
  const auto back = load_pending(tmp / "p.jsonl");
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].question, p.question);
  EXPECT_EQ(back[0].answer, p.answer);
  EXPECT_EQ(back[0].state, p.state);
  EXPECT_EQ(back[0].query_type, p.query_type);
  write_file(tmp / "bad.jsonl", "{\"question\": 1}\n");
  EXPECT_THROW(load_pending(tmp / "bad.jsonl"), Error);
}

TEST(Rebuild, MergesPendingPairs) {
  TempDir tmp;
  const auto art = test_support::build_toy(tmp.path(), {}, 3.0, /*index_all=*/true);
  const auto model = load_model(art.model);
  const auto before = load_index(index_file(art.index));
  const auto& first = before.entry(0);

  const fs::path pending = tmp / "pending.jsonl";
  write_file(pending, serialize_pending({first.raw_questions[0], "a brand new answer", "", "", ""}) +
                          serialize_pending({"banana urea market rate", "see the mandi board", "BIHAR", "", "x"}) +
                          serialize_pending({"   ", "ignored", "", "", ""}));
  RebuildOptions o;
  o.index = art.index;
  o.pending = pending;
  const auto s = run_rebuild(o);
  EXPECT_EQ(s.pending, 3u);
  EXPECT_EQ(s.new_entries, 1u);
  EXPECT_EQ(s.merged_answers, 1u);
  EXPECT_EQ(s.indexed, before.size() + 1);
  EXPECT_EQ(read_file(pending), "");

  const auto after = load_index(index_file(art.index), model.fingerprint);
  EXPECT_NE(after.content_fingerprint(), before.content_fingerprint());
  EXPECT_EQ(after.entry(0).answers.back(), "a brand new answer");
  const auto& added = after.entry(after.size() - 1);
  std::int64_t max_before = 0;
  for (const auto& e : before.entries()) max_before = std::max(max_before, e.entry_id);
  EXPECT_EQ(added.entry_id, max_before + 1);

  const auto q = model.embedder().embed_question("banana urea market rate");
  EXPECT_EQ(top_k(after, q.vector, 1)[0].entry_id, added.entry_id);
}

}  // namespace
}  // namespace agriqa
