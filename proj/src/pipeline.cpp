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

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <map>
#include <unordered_map>

#include <json.hpp>

#include "error.hpp"
#include "fileio.hpp"

#ifndef AGRIQA_DEFAULT_DATA_DIR
#define AGRIQA_DEFAULT_DATA_DIR "data"
#endif

namespace agriqa {

namespace {

constexpr std::string_view kModelFormat = "agriqa-model-1";

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

double to_double(std::string_view s, const std::string& what) {
  s = trim(s);
  double x = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    fail(ErrorKind::kParse, what + ": bad number '" + std::string(s) + "'");
  }
  return x;
}

std::int64_t to_int(std::string_view s, const std::string& what) {
  s = trim(s);
  std::int64_t x = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    fail(ErrorKind::kParse, what + ": bad integer '" + std::string(s) + "'");
  }
  return x;
}

std::uint64_t parse_hex64(std::string_view s, const std::string& what) {
  s = trim(s);
  std::uint64_t x = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x, 16);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    fail(ErrorKind::kParse, what + ": bad fingerprint '" + std::string(s) + "'");
  }
  return x;
}

const std::string& require_key(const std::map<std::string, std::string>& kv, const std::string& key,
                               const fs::path& file) {
  auto it = kv.find(key);
  if (it == kv.end()) fail(ErrorKind::kParse, file.string() + ": missing key '" + key + "'");
  return it->second;
}

void copy_file_atomic(const fs::path& from, const fs::path& to) { write_file(to, read_file(from)); }

fs::path index_dir(const fs::path& index_path) {
  return fs::is_directory(index_path) || !index_path.has_extension() ? index_path : index_path.parent_path();
}

fs::path resolve_model_dir(const fs::path& explicit_model, const fs::path& index_path) {
  if (!explicit_model.empty()) return explicit_model;
  if (auto meta = read_index_meta(index_path)) return meta->model_path;
  fail(ErrorKind::kInvalidArgument, "no model given and " + index_path.string() + " has no index.meta");
}

std::vector<QaRecord> read_all_records(const fs::path& input, const fs::path& column_map, std::size_t* skipped) {
  const auto aliases = load_column_aliases(column_map);
  std::vector<QaRecord> records;
  for (const auto& f : list_csv_inputs(input)) {
    auto parsed = parse_csv(read_file(f), aliases);
    if (skipped) *skipped += parsed.skipped;
    std::move(parsed.records.begin(), parsed.records.end(), std::back_inserter(records));
  }
  return records;
}

}  // namespace

fs::path default_lexicon_dir() { return fs::path(AGRIQA_DEFAULT_DATA_DIR) / "lexicon"; }

LexiconPaths LexiconPaths::in(const fs::path& dir) {
  return LexiconPaths{dir / "stopwords.txt", dir / "synonyms.tsv", dir / "crops.txt", dir / "gloss.tsv",
                      dir / "spell.tsv"};
}

std::vector<fs::path> list_csv_inputs(const fs::path& input) {
  if (input.empty()) fail(ErrorKind::kInvalidArgument, "no input path given");
  if (!fs::exists(input)) fail(ErrorKind::kIo, "input does not exist: " + input.string());
  if (!fs::is_directory(input)) return {input};
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(input)) {
    if (!e.is_regular_file()) continue;
    std::string ext = e.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".csv") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) fail(ErrorKind::kIo, "no .csv files in " + input.string());
  return files;
}

ColumnAliases load_column_aliases(const fs::path& path) {
  if (!path.empty()) return parse_column_aliases(read_file(path));
  const fs::path fallback = fs::path(AGRIQA_DEFAULT_DATA_DIR) / "kcc_columns.map";
  if (fs::exists(fallback)) return parse_column_aliases(read_file(fallback));
  return {};
}

fs::path corpus_base(const fs::path& corpus_path) {
  fs::path p = corpus_path;
  if (p.extension() == ".jsonl") p.replace_extension();
  if (p.extension() == ".train" || p.extension() == ".test") p.replace_extension();
  return p;
}

ModelBundle load_model(const fs::path& dir, const LexiconPaths* overrides) {
  const fs::path sidecar = dir / "model.txt";
  if (!fs::exists(sidecar)) fail(ErrorKind::kModel, "not a model directory (no model.txt): " + dir.string());
  const auto kv = parse_key_values(read_file(sidecar));
  if (require_key(kv, "format", sidecar) != kModelFormat) {
    fail(ErrorKind::kModel, sidecar.string() + ": unsupported format");
  }

  ModelBundle m;
  m.dir = dir;
  m.table = parse_vectors(read_file(dir / "vectors.txt"), read_file(dir / "counts.tsv"));
  if (to_int(require_key(kv, "dim", sidecar), "dim") != m.table.dim) {
    fail(ErrorKind::kModel, sidecar.string() + ": dim does not match vectors.txt");
  }
  m.sif.a = to_double(require_key(kv, "a", sidecar), "a");
  m.sif.boost = to_double(require_key(kv, "boost", sidecar), "boost");
  for (const auto& x : split(require_key(kv, "pc", sidecar), ',')) m.sif.pc.push_back(to_double(x, "pc"));
  if (m.sif.pc.size() != static_cast<std::size_t>(m.table.dim)) {
    fail(ErrorKind::kModel, sidecar.string() + ": pc length does not match dim");
  }
  for (const auto& t : split(require_key(kv, "crop_tokens", sidecar), ',')) {
    if (!trim(t).empty()) m.sif.crop_tokens.emplace(trim(t));
  }
  m.fingerprint = model_fingerprint(m.table, m.sif);
  if (hex64(m.fingerprint) != trim(require_key(kv, "fingerprint", sidecar))) {
    fail(ErrorKind::kModel, dir.string() + ": model files do not match the recorded fingerprint");
  }

  LexiconPaths paths = LexiconPaths::in(dir);
  if (overrides) {
    if (!overrides->stopwords.empty()) paths.stopwords = overrides->stopwords;
    if (!overrides->synonyms.empty()) paths.synonyms = overrides->synonyms;
    if (!overrides->crops.empty()) paths.crops = overrides->crops;
    if (!overrides->gloss.empty()) paths.gloss = overrides->gloss;
    if (!overrides->spell.empty()) paths.spell = overrides->spell;
  }
  TextLexicons lex{load_stopwords(paths.stopwords), SynonymMap::load(paths.synonyms),
                   SpellDictionary::load(paths.spell)};
  m.gloss = GlossLexicon::load(paths.gloss, lex.stopwords);
  m.normalizer = Normalizer(std::move(lex));
  m.crops = load_crop_lexicon(paths.crops);
  if (overrides && !overrides->crops.empty()) {
    // A different crop lexicon changes the weights and so the fingerprint;
    // indexes built with the recorded one will be rejected.
    m.sif.crop_tokens = crop_tokens(m.crops, m.normalizer);
    m.fingerprint = model_fingerprint(m.table, m.sif);
  }
  return m;
}

IngestSummary run_ingest(const IngestOptions& opts) {
  if (opts.out.empty()) fail(ErrorKind::kInvalidArgument, "ingest needs an output path");
  const fs::path lex_dir = opts.lexicon_dir.empty() ? default_lexicon_dir() : opts.lexicon_dir;
  const auto lex_paths = LexiconPaths::in(lex_dir);

  IngestSummary s;
  auto records = read_all_records(opts.input, opts.column_map, &s.skipped_rows);
  s.records = records.size();
  auto english = filter_english(std::move(records), opts.english_threshold);
  s.dropped_non_english = english.dropped;

  std::vector<std::vector<std::string>> token_lists;
  for (const auto& r : english.kept) {
    token_lists.push_back(tokenize_words(r.question));
    token_lists.push_back(tokenize_words(r.answer));
  }
  auto stopwords = load_stopwords(lex_paths.stopwords);
  const auto crops = load_crop_lexicon(lex_paths.crops);
  auto dict = build_spell_dictionary(token_lists, crops, stopwords, opts.spell_min_count);
  const std::string dict_text = dict.serialize();
  const Normalizer normalizer(TextLexicons{std::move(stopwords), SynonymMap::load(lex_paths.synonyms), std::move(dict)});

  auto weather = filter_weather(std::move(english.kept), &normalizer);
  s.weather = weather.weather.size();
  const auto entries = group_answers(weather.rest, normalizer);
  s.entries = entries.size();
  const auto split = split_train_test(entries, opts.ratio, opts.seed);
  s.train = split.train.size();
  s.test = split.test.size();

  const fs::path base = corpus_base(opts.out);
  s.train_path = base.string() + ".train.jsonl";
  s.test_path = base.string() + ".test.jsonl";
  s.spell_path = base.string() + ".spell.tsv";
  write_file(opts.out, serialize_entries(entries));
  write_file(s.train_path, serialize_entries(split.train));
  write_file(s.test_path, serialize_entries(split.test));
  write_file(s.spell_path, dict_text);
  return s;
}

TrainSummary run_train(const TrainOptions& opts) {
  if (opts.out.empty()) fail(ErrorKind::kInvalidArgument, "train needs an output directory");
  const fs::path lex_dir = opts.lexicon_dir.empty() ? default_lexicon_dir() : opts.lexicon_dir;
  auto src = LexiconPaths::in(lex_dir);
  src.spell = opts.spell.empty() ? fs::path(corpus_base(opts.corpus).string() + ".spell.tsv") : opts.spell;
  if (!opts.gloss.empty()) src.gloss = opts.gloss;
  if (!fs::exists(src.spell)) {
    fail(ErrorKind::kIo, "spell dictionary not found: " + src.spell.string() + " (written by ingest; or pass --spell)");
  }

  const auto entries = load_entries(opts.corpus);
  const auto sentences = training_sentences(entries);
  if (sentences.empty()) fail(ErrorKind::kInvalidArgument, "corpus has no questions to train on");

  TrainStats stats;
  const auto table = train_word2vec(sentences, opts.train, &stats);
  const Normalizer normalizer(TextLexicons{load_stopwords(src.stopwords), SynonymMap::load(src.synonyms),
                                           SpellDictionary::load(src.spell)});
  const auto crops = load_crop_lexicon(src.crops);
  const auto sif = fit_sif_model(table, sentences, opts.a, opts.boost, crop_tokens(crops, normalizer));
  const auto fp = model_fingerprint(table, sif);

  const auto dst = LexiconPaths::in(opts.out);
  copy_file_atomic(src.stopwords, dst.stopwords);
  copy_file_atomic(src.synonyms, dst.synonyms);
  copy_file_atomic(src.crops, dst.crops);
  copy_file_atomic(src.gloss, dst.gloss);
  copy_file_atomic(src.spell, dst.spell);
  write_file(opts.out / "vectors.txt", serialize_vectors(table));
  write_file(opts.out / "counts.tsv", serialize_counts(table));

  std::vector<std::string> pc, toks(sif.crop_tokens.begin(), sif.crop_tokens.end());
  for (double x : sif.pc) pc.push_back(g17(x));
  std::string side;
  side += "format=" + std::string(kModelFormat) + "\n";
  side += "dim=" + std::to_string(table.dim) + "\n";
  side += "vocab=" + std::to_string(table.size()) + "\n";
  side += "window=" + std::to_string(opts.train.window) + "\n";
  side += "negatives=" + std::to_string(opts.train.negatives) + "\n";
  side += "epochs=" + std::to_string(opts.train.epochs) + "\n";
  side += "learning_rate=" + g17(opts.train.learning_rate) + "\n";
  side += "min_count=" + std::to_string(opts.train.min_count) + "\n";
  side += "seed=" + std::to_string(opts.train.seed) + "\n";
  side += "a=" + g17(sif.a) + "\n";
  side += "boost=" + g17(sif.boost) + "\n";
  side += "crop_tokens=" + join(toks, ",") + "\n";
  side += "pc=" + join(pc, ",") + "\n";
  side += "fingerprint=" + hex64(fp) + "\n";
  write_file(opts.out / "model.txt", side);

  return TrainSummary{sentences.size(), table.size(), table.dim, stats.epoch_mean_loss, fp};
}

fs::path index_file(const fs::path& index_path) {
  return fs::is_directory(index_path) || !index_path.has_extension() ? index_path / "index.bin" : index_path;
}

std::optional<IndexMeta> read_index_meta(const fs::path& index_path) {
  const fs::path meta = index_dir(index_path) / "index.meta";
  if (!fs::exists(meta)) return std::nullopt;
  const auto kv = parse_key_values(read_file(meta));
  IndexMeta m;
  m.model_path = require_key(kv, "model_path", meta);
  m.model_fingerprint = parse_hex64(require_key(kv, "model_fingerprint", meta), meta.string());
  return m;
}

void write_index_artifacts(const QuestionIndex& index, const fs::path& dir, const fs::path& model_dir) {
  save_index(index, dir / "index.bin");
  std::string meta;
  meta += "model_path=" + fs::absolute(model_dir).lexically_normal().string() + "\n";
  meta += "model_fingerprint=" + hex64(index.model_fingerprint()) + "\n";
  meta += "content_fingerprint=" + hex64(index.content_fingerprint()) + "\n";
  meta += "entries=" + std::to_string(index.size()) + "\n";
  meta += "excluded=" + std::to_string(index.excluded()) + "\n";
  meta += "dim=" + std::to_string(index.dim()) + "\n";
  write_file(dir / "index.meta", meta);
}

IndexSummary run_index(const IndexOptions& opts) {
  if (opts.out.empty()) fail(ErrorKind::kInvalidArgument, "index needs an output directory");
  const auto model = load_model(opts.model);
  const auto entries = load_entries(opts.corpus);
  BuildReport rep;
  const auto index = build_index(entries, model.embedder(), model.fingerprint, &rep);
  write_index_artifacts(index, opts.out, opts.model);
  return IndexSummary{index.size(), rep.excluded_ids.size(), index.model_fingerprint(), index.content_fingerprint()};
}

std::string run_eval(const EvalOptions& opts) {
  const auto model = load_model(resolve_model_dir(opts.model, opts.index));
  const auto index = load_index(index_file(opts.index), model.fingerprint);
  const auto test = load_entries(opts.test);
  std::optional<std::vector<LabeledPair>> labels;
  if (!opts.labels.empty()) labels = load_labeled_pairs(opts.labels);

  std::vector<MetricSpec> specs;
  for (Metric m : opts.metrics) {
    double t = kDefaultThreshold;
    if (opts.threshold) {
      t = *opts.threshold;
    } else if (labels) {
      t = calibrate_threshold(*labels, m, model.normalizer, model.gloss).threshold;
    }
    specs.push_back(MetricSpec{m, t});
  }
  const auto embedder = model.embedder();
  return format_report(evaluate_topn(index, test, embedder, model.gloss, specs, opts.top_n));
}

std::string run_sweep(const SweepOptions& opts) {
  const auto model = load_model(resolve_model_dir(opts.model, opts.index));
  const auto train = load_entries(opts.train);
  const auto test = load_entries(opts.test);
  SweepConfig cfg{opts.train_config, model.sif.a, model.sif.boost, model.sif.crop_tokens};
  return format_sweep(dimension_sweep(train, test, opts.dims, cfg, model.normalizer, model.gloss));
}

std::string run_stats(const StatsOptions& opts) {
  const auto records = read_all_records(opts.input, opts.column_map, nullptr);
  const fs::path crops = opts.crops.empty() ? default_lexicon_dir() / "crops.txt" : opts.crops;
  return format_stats(corpus_stats(records, load_crop_lexicon(crops)));
}

std::string serialize_pending(const PendingPair& p) {
  nlohmann::ordered_json j;
  j["question"] = p.question;
  j["answer"] = p.answer;
  j["state"] = p.state;
  j["district"] = p.district;
  j["query_type"] = p.query_type;
  return j.dump() + "\n";
}

std::vector<PendingPair> load_pending(const fs::path& path) {
  std::vector<PendingPair> out;
  if (!fs::exists(path)) return out;
  std::size_t line_no = 0;
  for (const auto& line : split(read_file(path), '\n')) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto j = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (!j.is_object() || !j.contains("question") || !j.contains("answer") || !j["question"].is_string() ||
        !j["answer"].is_string()) {
      fail(ErrorKind::kParse, path.string() + ":" + std::to_string(line_no) + ": bad pending pair");
    }
    PendingPair p;
    p.question = j["question"].get<std::string>();
    p.answer = j["answer"].get<std::string>();
    p.state = j.value("state", "");
    p.district = j.value("district", "");
    p.query_type = j.value("query_type", "");
    out.push_back(std::move(p));
  }
  return out;
}

RebuildSummary run_rebuild(const RebuildOptions& opts) {
  const fs::path model_dir = resolve_model_dir(opts.model, opts.index);
  const auto model = load_model(model_dir);
  const auto old_index = load_index(index_file(opts.index), model.fingerprint);
  const auto pending = load_pending(opts.pending);

  RebuildSummary s;
  s.pending = pending.size();
  auto entries = old_index.entries();
  std::unordered_map<std::string, std::size_t> by_question;
  std::int64_t next_id = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    by_question.emplace(entries[i].canonical_question, i);
    next_id = std::max(next_id, entries[i].entry_id + 1);
  }
  for (const auto& p : pending) {
    const std::string key = model.normalizer.normalize(p.question).joined();
    const std::string answer(trim(p.answer));
    if (key.empty() || answer.empty()) continue;
    auto it = by_question.find(key);
    if (it == by_question.end()) {
      CanonicalEntry e;
      e.entry_id = next_id++;
      e.canonical_question = key;
      e.query_type = p.query_type;
      entries.push_back(std::move(e));
      it = by_question.emplace(key, entries.size() - 1).first;
      ++s.new_entries;
    } else if (std::find(entries[it->second].answers.begin(), entries[it->second].answers.end(), answer) ==
               entries[it->second].answers.end()) {
      ++s.merged_answers;
    }
    auto& e = entries[it->second];
    if (std::find(e.raw_questions.begin(), e.raw_questions.end(), p.question) == e.raw_questions.end()) {
      e.raw_questions.push_back(p.question);
    }
    if (std::find(e.answers.begin(), e.answers.end(), answer) == e.answers.end()) e.answers.push_back(answer);
    if (!p.state.empty()) ++e.states[p.state];
  }

  const auto index = build_index(entries, model.embedder(), model.fingerprint);
  write_index_artifacts(index, index_dir(opts.index), model_dir);
  if (!opts.keep_pending && fs::exists(opts.pending)) write_file(opts.pending, "");
  s.indexed = index.size();
  s.content_fingerprint = index.content_fingerprint();
  return s;
}

}  // namespace agriqa
