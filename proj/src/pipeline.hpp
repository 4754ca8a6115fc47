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

// File-to-file drivers for each lifecycle stage, plus the on-disk model
// directory that ties vectors, SIF parameters and lexicons together.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "eval.hpp"
#include "index.hpp"
#include "ranking.hpp"
#include "sif.hpp"
#include "textprep.hpp"
#include "word2vec.hpp"

namespace agriqa {

namespace fs = std::filesystem;

// Default lexicon directory baked in at build time.
fs::path default_lexicon_dir();

struct LexiconPaths {
  fs::path stopwords;
  fs::path synonyms;
  fs::path crops;
  fs::path gloss;
  fs::path spell;

  // stopwords.txt, synonyms.tsv, crops.txt, gloss.tsv and spell.tsv in `dir`.
  static LexiconPaths in(const fs::path& dir);
};

// Everything needed to embed and score text. Immutable after loading.
struct ModelBundle {
  fs::path dir;
  Normalizer normalizer;
  WordVectorTable table;
  SifModel sif;
  GlossLexicon gloss;
  std::vector<std::string> crops;
  std::uint64_t fingerprint = 0;

  Embedder embedder() const { return Embedder(normalizer, table, sif); }
};

/// Reads a model directory. Lexicon files are taken from the directory
/// unless overridden. Throws kModel when the stored fingerprint does not
/// match the loaded vectors and parameters.
ModelBundle load_model(const fs::path& dir, const LexiconPaths* overrides = nullptr);

// ---- ingest ---------------------------------------------------------------

struct IngestOptions {
  fs::path input;  // CSV file or directory of *.csv
  fs::path out;    // corpus.jsonl; train/test/spell files are written beside it
  fs::path column_map;
  fs::path lexicon_dir;
  double ratio = 0.8;
  std::uint64_t seed = 42;
  std::int64_t spell_min_count = 2;
  double english_threshold = kDefaultLatinFraction;
};

struct IngestSummary {
  std::size_t records = 0;
  std::size_t skipped_rows = 0;
  std::size_t dropped_non_english = 0;
  std::size_t weather = 0;
  std::size_t entries = 0;
  std::size_t train = 0;
  std::size_t test = 0;
  fs::path train_path;
  fs::path test_path;
  fs::path spell_path;
};

IngestSummary run_ingest(const IngestOptions& opts);

// corpus.jsonl -> corpus; corpus.train.jsonl -> corpus, etc.
fs::path corpus_base(const fs::path& corpus_path);

// ---- train ----------------------------------------------------------------

struct TrainOptions {
  fs::path corpus;
  fs::path out;
  TrainConfig train;
  double a = 1e-3;
  double boost = 3.0;
  fs::path lexicon_dir;
  fs::path spell;  // default: <corpus base>.spell.tsv
  fs::path gloss;  // default: <lexicon_dir>/gloss.tsv
};

struct TrainSummary {
  std::size_t sentences = 0;
  std::size_t vocab = 0;
  int dim = 0;
  std::vector<double> epoch_loss;
  std::uint64_t fingerprint = 0;
};

TrainSummary run_train(const TrainOptions& opts);

// ---- index ----------------------------------------------------------------

struct IndexOptions {
  fs::path corpus;
  fs::path model;
  fs::path out;  // directory
};

struct IndexSummary {
  std::size_t indexed = 0;
  std::size_t excluded = 0;
  std::uint64_t model_fingerprint = 0;
  std::uint64_t content_fingerprint = 0;
};

IndexSummary run_index(const IndexOptions& opts);

// idx/ -> idx/index.bin; a file path is returned as is.
fs::path index_file(const fs::path& index_path);

struct IndexMeta {
  fs::path model_path;
  std::uint64_t model_fingerprint = 0;
};

// Reads <dir>/index.meta when present.
std::optional<IndexMeta> read_index_meta(const fs::path& index_path);
void write_index_artifacts(const QuestionIndex& index, const fs::path& dir, const fs::path& model_dir);

// ---- eval -----------------------------------------------------------------

struct EvalOptions {
  fs::path index;
  fs::path model;  // default: from index.meta
  fs::path test;
  std::vector<Metric> metrics = {Metric::kLesk, Metric::kJaccard};
  std::vector<int> top_n = {1, 3, 5};
  std::optional<double> threshold;
  fs::path labels;
};

std::string run_eval(const EvalOptions& opts);

struct SweepOptions {
  fs::path train;
  fs::path test;
  fs::path model;  // lexicons, a, boost and crops come from here
  fs::path index;  // used to find the model when `model` is empty
  std::vector<int> dims = {10, 25, 50, 75, 100};
  TrainConfig train_config;
};

std::string run_sweep(const SweepOptions& opts);

// ---- stats ----------------------------------------------------------------

struct StatsOptions {
  fs::path input;
  fs::path crops;
  fs::path column_map;
};

std::string run_stats(const StatsOptions& opts);

// ---- pending pairs and rebuild --------------------------------------------

struct PendingPair {
  std::string question;
  std::string answer;
  std::string state;
  std::string district;
  std::string query_type;
};

std::string serialize_pending(const PendingPair& p);  // one JSON line
std::vector<PendingPair> load_pending(const fs::path& path);

struct RebuildOptions {
  fs::path index;
  fs::path model;  // default: from index.meta
  fs::path pending;
  bool keep_pending = false;
};

struct RebuildSummary {
  std::size_t pending = 0;
  std::size_t new_entries = 0;
  std::size_t merged_answers = 0;
  std::size_t indexed = 0;
  std::uint64_t content_fingerprint = 0;
};

/// Folds pending pairs into the index's entry table (same normalized
/// question: answer appended; otherwise a new entry with the next id),
/// re-embeds with the existing model and atomically replaces the index file.
RebuildSummary run_rebuild(const RebuildOptions& opts);

std::vector<fs::path> list_csv_inputs(const fs::path& input);
ColumnAliases load_column_aliases(const fs::path& path);

}  // namespace agriqa
