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

// agriqa: operator command line for the full lifecycle. Talks to the
// library only through the C API.

#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "agriqa/agriqa.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

const char* opt(const std::string& s) { return s.empty() ? nullptr : s.c_str(); }

std::string join_ints(const std::vector<int>& v) {
  std::string out;
  for (int x : v) out += (out.empty() ? "" : ",") + std::to_string(x);
  return out;
}

int report_failure(agriqa_status st) {
  std::cerr << "error (" << agriqa_status_name(st) << "): " << agriqa_last_error() << "\n";
  return kExitData;
}

// Writes `text` to `out_path`, or stdout when empty.
int deliver(agriqa_status st, char* text, const std::string& out_path) {
  if (st != AGRIQA_OK) return report_failure(st);
  int rc = kExitOk;
  if (out_path.empty()) {
    std::fputs(text, stdout);
  } else {
    std::ofstream f(out_path, std::ios::binary);
    f << text;
    if (!f) {
      std::cerr << "error: could not write " << out_path << "\n";
      rc = kExitData;
    }
  }
  agriqa_string_free(text);
  return rc;
}

struct EngineFlags {
  std::string config, index, model, pending, ui_dir, weather_url;
  std::optional<double> threshold, similarity_floor;
  bool offline_weather = false;

  void attach(CLI::App* app) {
    app->add_option("--config", config, "Service config file (default: $AGRIQA_CONFIG)");
    app->add_option("--index", index, "Index directory or file (overrides the config)");
    app->add_option("--model", model, "Model directory (default: recorded with the index)");
    app->add_option("--threshold", threshold, "Metric threshold for answering");
    app->add_option("--similarity-floor", similarity_floor, "Minimum cosine similarity for answering")
        ->check(CLI::Range(-1.0, 1.0));
    app->add_option("--weather-url", weather_url, "HTTP weather provider endpoint");
    app->add_flag("--offline-weather", offline_weather, "Use the deterministic mock weather provider");
  }

  agriqa_status open(agriqa_engine** engine) const {
    agriqa_engine_options o;
    agriqa_engine_options_init(&o);
    o.config_path = opt(config);
    o.index_path = opt(index);
    o.model_path = opt(model);
    o.pending_path = opt(pending);
    o.ui_dir = opt(ui_dir);
    o.weather_url = opt(weather_url);
    if (threshold) {
      o.has_threshold = 1;
      o.threshold = *threshold;
    }
    if (similarity_floor) {
      o.has_similarity_floor = 1;
      o.similarity_floor = *similarity_floor;
    }
    o.offline_weather = offline_weather ? 1 : 0;
    return agriqa_engine_open(&o, engine);
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"AgriQA: retrieval-based question answering over farmer helpline logs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(agriqa_version()));

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Parse CSV logs into canonical corpus files");
  agriqa_ingest_options ing;
  agriqa_ingest_options_init(&ing);
  std::string ing_input, ing_out, ing_map, ing_lex;
  ingest->add_option("--input", ing_input, "CSV file or directory of *.csv")->required();
  ingest->add_option("--out", ing_out, "Output corpus (.jsonl); train/test/spell files go beside it")->required();
  ingest->add_option("--column-map", ing_map, "Header alias file (canonical=alias1,alias2)");
  ingest->add_option("--lexicon-dir", ing_lex, "Directory with stopwords, synonyms and crops");
  ingest->add_option("--ratio", ing.ratio, "Train fraction")->check(CLI::Range(0.0, 1.0));
  ingest->add_option("--seed", ing.seed, "Split seed");
  ingest->add_option("--spell-min-count", ing.spell_min_count, "Minimum count for spell dictionary words")
      ->check(CLI::PositiveNumber);
  ingest->add_option("--english-threshold", ing.english_threshold, "Minimum ASCII code-point fraction")
      ->check(CLI::Range(0.0, 1.0));

  // train
  auto* train = app.add_subcommand("train", "Train word vectors and the sentence-embedding model");
  agriqa_train_options tr;
  agriqa_train_options_init(&tr);
  std::string tr_corpus, tr_out, tr_lex, tr_spell, tr_gloss;
  train->add_option("--corpus", tr_corpus, "Corpus .jsonl")->required();
  train->add_option("--out", tr_out, "Model directory")->required();
  train->add_option("--dims", tr.dims, "Embedding dimension")->check(CLI::PositiveNumber);
  train->add_option("--window", tr.window, "Context window")->check(CLI::PositiveNumber);
  train->add_option("--negatives", tr.negatives, "Negative samples per pair")->check(CLI::PositiveNumber);
  train->add_option("--epochs", tr.epochs, "Training epochs")->check(CLI::PositiveNumber);
  train->add_option("--lr", tr.learning_rate, "Initial learning rate")->check(CLI::PositiveNumber);
  train->add_option("--min-count", tr.min_count, "Minimum token count for the vocabulary")->check(CLI::PositiveNumber);
  train->add_option("--seed", tr.seed, "Random seed");
  train->add_option("--a", tr.sif_a, "SIF smoothing parameter")->check(CLI::PositiveNumber);
  train->add_option("--boost", tr.boost, "Crop-token weight multiplier (>= 1)")->check(CLI::Range(1.0, 1e9));
  train->add_option("--lexicon-dir", tr_lex, "Directory with stopwords, synonyms, crops and gloss");
  train->add_option("--spell", tr_spell, "Spell dictionary (default: written by ingest beside the corpus)");
  train->add_option("--gloss", tr_gloss, "Gloss lexicon (word<TAB>gloss)");

  // index
  auto* index = app.add_subcommand("index", "Embed canonical questions into a searchable index");
  std::string ix_corpus, ix_model, ix_out;
  index->add_option("--corpus", ix_corpus, "Corpus .jsonl")->required();
  index->add_option("--model", ix_model, "Model directory")->required();
  index->add_option("--out", ix_out, "Index directory")->required();

  // eval
  auto* eval = app.add_subcommand("eval", "Top-N evaluation on a held-out split, or a dimension sweep");
  std::string ev_index, ev_model, ev_test, ev_labels, ev_out, ev_train;
  std::vector<std::string> ev_metrics;
  std::vector<int> ev_topn, ev_sweep;
  std::optional<double> ev_threshold;
  agriqa_sweep_options sw;
  agriqa_sweep_options_init(&sw);
  eval->add_option("--index", ev_index, "Index directory");
  eval->add_option("--model", ev_model, "Model directory (default: recorded with the index)");
  eval->add_option("--test", ev_test, "Test split .jsonl")->required();
  eval->add_option("--metric", ev_metrics, "lesk and/or jaccard (default: both)")
      ->delimiter(',')
      ->check(CLI::IsMember({"lesk", "jaccard"}));
  eval->add_option("--top-n", ev_topn, "N values (default: 1,3,5)")->delimiter(',')->check(CLI::PositiveNumber);
  auto* thr = eval->add_option("--threshold", ev_threshold, "Metric threshold for a hit");
  auto* lab = eval->add_option("--labels", ev_labels, "Labeled pairs CSV used to calibrate the threshold");
  thr->excludes(lab);
  eval->add_option("--out", ev_out, "Write the report here instead of stdout");
  auto* sweep = eval->add_option("--sweep", ev_sweep, "Dimension sweep over these dims instead of Top-N")
                    ->delimiter(',')
                    ->check(CLI::PositiveNumber);
  eval->add_option("--train", ev_train, "Train split .jsonl (sweep only)")->needs(sweep);
  eval->add_option("--seed", sw.seed, "Random seed (sweep only)")->needs(sweep);
  eval->add_option("--epochs", sw.epochs, "Training epochs (sweep only)")->needs(sweep)->check(CLI::PositiveNumber);

  // ask
  auto* ask = app.add_subcommand("ask", "Answer one question");
  EngineFlags ask_flags;
  ask_flags.attach(ask);
  std::string question, state, district;
  int top_k = 5;
  ask->add_option("--question,-q", question, "Question text")->required();
  ask->add_option("--state", state, "Farmer's state");
  ask->add_option("--district", district, "Farmer's district");
  ask->add_option("--top-k", top_k, "Alternatives to return")->check(CLI::Range(1, 100));

  // serve
  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  EngineFlags serve_flags;
  serve_flags.attach(serve);
  std::optional<int> port;
  std::string host = "127.0.0.1";
  serve->add_option("--port", port, "Listen port (default: config, else 8080)")->check(CLI::Range(0, 65535));
  serve->add_option("--host", host, "Listen address");
  serve->add_option("--pending", serve_flags.pending, "Pending pairs file");
  serve->add_option("--ui-dir", serve_flags.ui_dir, "Static files served under /ui/");

  // stats
  auto* stats = app.add_subcommand("stats", "Descriptive statistics of raw CSV logs");
  std::string st_input, st_crops, st_map, st_out;
  stats->add_option("--input", st_input, "CSV file or directory")->required();
  stats->add_option("--crops", st_crops, "Crop lexicon");
  stats->add_option("--column-map", st_map, "Header alias file");
  stats->add_option("--out", st_out, "Write here instead of stdout");

  // rebuild
  auto* rebuild = app.add_subcommand("rebuild", "Fold pending QA pairs into the index");
  std::string rb_index, rb_model, rb_pending;
  bool rb_keep = false;
  rebuild->add_option("--index", rb_index, "Index directory")->required();
  rebuild->add_option("--model", rb_model, "Model directory (default: recorded with the index)");
  rebuild->add_option("--pending", rb_pending, "Pending pairs file (default: <index>/pending.jsonl)");
  rebuild->add_flag("--keep-pending", rb_keep, "Do not clear the pending file afterwards");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  char* text = nullptr;
  if (*ingest) {
    ing.input = ing_input.c_str();
    ing.out = ing_out.c_str();
    ing.column_map = opt(ing_map);
    ing.lexicon_dir = opt(ing_lex);
    const auto st = agriqa_ingest(&ing, &text);
    return deliver(st, text, "");
  }
  if (*train) {
    tr.corpus = tr_corpus.c_str();
    tr.out = tr_out.c_str();
    tr.lexicon_dir = opt(tr_lex);
    tr.spell = opt(tr_spell);
    tr.gloss = opt(tr_gloss);
    const auto st = agriqa_train(&tr, &text);
    return deliver(st, text, "");
  }
  if (*index) {
    agriqa_index_options o;
    agriqa_index_options_init(&o);
    o.corpus = ix_corpus.c_str();
    o.model = ix_model.c_str();
    o.out = ix_out.c_str();
    const auto st = agriqa_index(&o, &text);
    return deliver(st, text, "");
  }
  if (*eval) {
    if (ev_index.empty() && ev_model.empty()) {
      std::cerr << "eval: --index or --model is required\n" << eval->help();
      return kExitUsage;
    }
    if (!ev_sweep.empty()) {
      if (ev_train.empty()) {
        std::cerr << "eval: --sweep needs --train\n";
        return kExitUsage;
      }
      const std::string dims = join_ints(ev_sweep);
      sw.train = ev_train.c_str();
      sw.test = ev_test.c_str();
      sw.model = opt(ev_model);
      sw.index = opt(ev_index);
      sw.dims = dims.c_str();
      const auto st = agriqa_sweep(&sw, &text);
      return deliver(st, text, ev_out);
    }
    if (ev_index.empty()) {
      std::cerr << "eval: --index is required\n";
      return kExitUsage;
    }
    std::string metrics;
    for (const auto& m : ev_metrics) metrics += (metrics.empty() ? "" : ",") + m;
    const std::string topn = join_ints(ev_topn);
    agriqa_eval_options o;
    agriqa_eval_options_init(&o);
    o.index = ev_index.c_str();
    o.model = opt(ev_model);
    o.test = ev_test.c_str();
    o.metrics = opt(metrics);
    o.top_n = opt(topn);
    if (ev_threshold) {
      o.has_threshold = 1;
      o.threshold = *ev_threshold;
    }
    o.labels = opt(ev_labels);
    const auto st = agriqa_eval(&o, &text);
    return deliver(st, text, ev_out);
  }
  if (*ask) {
    agriqa_engine* engine = nullptr;
    if (auto st = ask_flags.open(&engine); st != AGRIQA_OK) return report_failure(st);
    nlohmann::json req{{"question", question}, {"top_k", top_k}};
    if (!state.empty()) req["state"] = state;
    if (!district.empty()) req["district"] = district;
    const std::string body = req.dump();
    const auto st = agriqa_engine_ask(engine, body.c_str(), &text);
    int rc = st == AGRIQA_OK ? kExitOk : report_failure(st);
    if (st == AGRIQA_OK) {
      std::fputs(text, stdout);
      std::fputc('\n', stdout);
      agriqa_string_free(text);
    }
    agriqa_engine_close(engine);
    return rc;
  }
  if (*serve) {
    // Block the shutdown signals before any thread starts so that only
    // sigwait below sees them.
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    agriqa_engine* engine = nullptr;
    if (auto st = serve_flags.open(&engine); st != AGRIQA_OK) return report_failure(st);
    agriqa_server* server = nullptr;
    const int listen_port = port ? *port : agriqa_engine_config_port(engine);
    if (auto st = agriqa_server_start(engine, host.c_str(), listen_port, &server); st != AGRIQA_OK) {
      agriqa_engine_close(engine);
      return report_failure(st);
    }
    std::cerr << "serving on http://" << host << ":" << agriqa_server_port(server) << "\n";
    int sig = 0;
    sigwait(&signals, &sig);
    agriqa_server_stop(server);
    agriqa_server_free(server);
    agriqa_engine_close(engine);
    return kExitOk;
  }
  if (*stats) {
    agriqa_stats_options o;
    agriqa_stats_options_init(&o);
    o.input = st_input.c_str();
    o.crops = opt(st_crops);
    o.column_map = opt(st_map);
    const auto st = agriqa_stats(&o, &text);
    return deliver(st, text, st_out);
  }
  if (*rebuild) {
    agriqa_rebuild_options o;
    agriqa_rebuild_options_init(&o);
    o.index = rb_index.c_str();
    o.model = opt(rb_model);
    o.pending = opt(rb_pending);
    o.keep_pending = rb_keep ? 1 : 0;
    const auto st = agriqa_rebuild(&o, &text);
    return deliver(st, text, "");
  }
  return kExitUsage;
}
