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

#include "agriqa/agriqa.h"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

#include "engine.hpp"
#include "error.hpp"
#include "fileio.hpp"
#include "http_server.hpp"
#include "pipeline.hpp"

struct agriqa_engine {
  std::unique_ptr<agriqa::Engine> engine;
};

struct agriqa_server {
  std::unique_ptr<agriqa::HttpServer> server;
};

namespace {

using agriqa::ErrorKind;

thread_local std::string g_last_error;

agriqa_status status_of(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return AGRIQA_ERR_INVALID_ARGUMENT;
    case ErrorKind::kIo: return AGRIQA_ERR_IO;
    case ErrorKind::kParse: return AGRIQA_ERR_PARSE;
    case ErrorKind::kModel: return AGRIQA_ERR_MODEL;
    case ErrorKind::kState: return AGRIQA_ERR_STATE;
  }
  return AGRIQA_ERR_INTERNAL;
}

// Runs `body`, translating exceptions into a status and the thread's last
// error message.
template <typename F>
agriqa_status guarded(F&& body) {
  g_last_error.clear();
  try {
    body();
    return AGRIQA_OK;
  } catch (const agriqa::Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const nlohmann::json::exception& e) {
    g_last_error = std::string("bad JSON: ") + e.what();
    return AGRIQA_ERR_INVALID_ARGUMENT;
  } catch (const std::filesystem::filesystem_error& e) {
    g_last_error = e.what();
    return AGRIQA_ERR_IO;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return AGRIQA_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return AGRIQA_ERR_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (p == nullptr) agriqa::fail(ErrorKind::kInvalidArgument, std::string(what) + " must not be NULL");
}

std::filesystem::path path_or_empty(const char* s) { return s ? std::filesystem::path(s) : std::filesystem::path(); }

void emit(char** out, const std::string& text) {
  if (!out) return;
  char* buf = static_cast<char*>(std::malloc(text.size() + 1));
  if (!buf) throw std::bad_alloc();
  std::memcpy(buf, text.data(), text.size() + 1);
  *out = buf;
}

std::vector<int> int_list(const char* text, const char* what) {
  std::vector<int> out;
  for (const auto& part : agriqa::split(text, ',')) {
    const auto t = agriqa::trim(part);
    if (t.empty()) continue;
    char* end = nullptr;
    const std::string s(t);
    const long v = std::strtol(s.c_str(), &end, 10);
    if (*end != '\0') agriqa::fail(ErrorKind::kInvalidArgument, std::string(what) + ": bad integer '" + s + "'");
    out.push_back(static_cast<int>(v));
  }
  if (out.empty()) agriqa::fail(ErrorKind::kInvalidArgument, std::string(what) + " is empty");
  return out;
}

agriqa::TrainConfig train_config(int window, int negatives, int epochs, double lr, int64_t min_count, uint64_t seed) {
  agriqa::TrainConfig c;
  c.window = window;
  c.negatives = negatives;
  c.epochs = epochs;
  c.learning_rate = lr;
  c.min_count = min_count;
  c.seed = seed;
  return c;
}

}  // namespace

extern "C" {

const char* agriqa_version(void) { return "1.0.0"; }

const char* agriqa_last_error(void) { return g_last_error.c_str(); }

const char* agriqa_status_name(agriqa_status status) {
  switch (status) {
    case AGRIQA_OK: return "ok";
    case AGRIQA_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case AGRIQA_ERR_IO: return "io";
    case AGRIQA_ERR_PARSE: return "parse";
    case AGRIQA_ERR_MODEL: return "model";
    case AGRIQA_ERR_STATE: return "state";
    case AGRIQA_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

void agriqa_string_free(char* s) { std::free(s); }

void agriqa_ingest_options_init(agriqa_ingest_options* o) {
  if (!o) return;
  *o = agriqa_ingest_options{};
  o->ratio = 0.8;
  o->seed = 42;
  o->spell_min_count = 2;
  o->english_threshold = agriqa::kDefaultLatinFraction;
}

agriqa_status agriqa_ingest(const agriqa_ingest_options* o, char** summary) {
  return guarded([&] {
    require(o, "options");
    agriqa::IngestOptions opts;
    opts.input = path_or_empty(o->input);
    opts.out = path_or_empty(o->out);
    opts.column_map = path_or_empty(o->column_map);
    opts.lexicon_dir = path_or_empty(o->lexicon_dir);
    opts.ratio = o->ratio;
    opts.seed = o->seed;
    opts.spell_min_count = o->spell_min_count;
    opts.english_threshold = o->english_threshold;
    const auto s = agriqa::run_ingest(opts);
    emit(summary, "entries=" + std::to_string(s.entries) + " dropped_non_english=" +
                      std::to_string(s.dropped_non_english) + " weather=" + std::to_string(s.weather) + "\n");
  });
}

void agriqa_train_options_init(agriqa_train_options* o) {
  if (!o) return;
  *o = agriqa_train_options{};
  const agriqa::TrainConfig d;
  o->dims = d.dim;
  o->window = d.window;
  o->negatives = d.negatives;
  o->epochs = d.epochs;
  o->learning_rate = d.learning_rate;
  o->min_count = d.min_count;
  o->seed = d.seed;
  o->sif_a = 1e-3;
  o->boost = 3.0;
}

agriqa_status agriqa_train(const agriqa_train_options* o, char** summary) {
  return guarded([&] {
    require(o, "options");
    agriqa::TrainOptions opts;
    opts.corpus = path_or_empty(o->corpus);
    opts.out = path_or_empty(o->out);
    opts.train = train_config(o->window, o->negatives, o->epochs, o->learning_rate, o->min_count, o->seed);
    opts.train.dim = o->dims;
    opts.a = o->sif_a;
    opts.boost = o->boost;
    opts.lexicon_dir = path_or_empty(o->lexicon_dir);
    opts.spell = path_or_empty(o->spell);
    opts.gloss = path_or_empty(o->gloss);
    const auto s = agriqa::run_train(opts);
    char loss[64] = "nan";
    if (!s.epoch_loss.empty()) std::snprintf(loss, sizeof(loss), "%.6f", s.epoch_loss.back());
    emit(summary, "sentences=" + std::to_string(s.sentences) + " vocab=" + std::to_string(s.vocab) +
                      " dim=" + std::to_string(s.dim) + " final_epoch_loss=" + loss +
                      " fingerprint=" + agriqa::hex64(s.fingerprint) + "\n");
  });
}

void agriqa_index_options_init(agriqa_index_options* o) {
  if (o) *o = agriqa_index_options{};
}

agriqa_status agriqa_index(const agriqa_index_options* o, char** summary) {
  return guarded([&] {
    require(o, "options");
    const auto s = agriqa::run_index({path_or_empty(o->corpus), path_or_empty(o->model), path_or_empty(o->out)});
    emit(summary, "indexed=" + std::to_string(s.indexed) + " excluded=" + std::to_string(s.excluded) +
                      " fingerprint=" + agriqa::hex64(s.content_fingerprint) + "\n");
  });
}

void agriqa_eval_options_init(agriqa_eval_options* o) {
  if (o) *o = agriqa_eval_options{};
}

agriqa_status agriqa_eval(const agriqa_eval_options* o, char** report) {
  return guarded([&] {
    require(o, "options");
    agriqa::EvalOptions opts;
    opts.index = path_or_empty(o->index);
    opts.model = path_or_empty(o->model);
    opts.test = path_or_empty(o->test);
    if (o->metrics) {
      opts.metrics.clear();
      for (const auto& m : agriqa::split(o->metrics, ',')) {
        if (!agriqa::trim(m).empty()) opts.metrics.push_back(agriqa::parse_metric(agriqa::trim(m)));
      }
      if (opts.metrics.empty()) agriqa::fail(ErrorKind::kInvalidArgument, "metric list is empty");
    }
    if (o->top_n) opts.top_n = int_list(o->top_n, "top-n");
    if (o->has_threshold && o->labels) {
      agriqa::fail(ErrorKind::kInvalidArgument, "give either a threshold or a labels file, not both");
    }
    if (o->has_threshold) opts.threshold = o->threshold;
    opts.labels = path_or_empty(o->labels);
    emit(report, agriqa::run_eval(opts));
  });
}

void agriqa_sweep_options_init(agriqa_sweep_options* o) {
  if (!o) return;
  *o = agriqa_sweep_options{};
  const agriqa::TrainConfig d;
  o->window = d.window;
  o->negatives = d.negatives;
  o->epochs = d.epochs;
  o->learning_rate = d.learning_rate;
  o->min_count = d.min_count;
  o->seed = d.seed;
}

agriqa_status agriqa_sweep(const agriqa_sweep_options* o, char** table) {
  return guarded([&] {
    require(o, "options");
    agriqa::SweepOptions opts;
    opts.train = path_or_empty(o->train);
    opts.test = path_or_empty(o->test);
    opts.model = path_or_empty(o->model);
    opts.index = path_or_empty(o->index);
    if (o->dims) opts.dims = int_list(o->dims, "dims");
    opts.train_config = train_config(o->window, o->negatives, o->epochs, o->learning_rate, o->min_count, o->seed);
    emit(table, agriqa::run_sweep(opts));
  });
}

void agriqa_stats_options_init(agriqa_stats_options* o) {
  if (o) *o = agriqa_stats_options{};
}

agriqa_status agriqa_stats(const agriqa_stats_options* o, char** report) {
  return guarded([&] {
    require(o, "options");
    emit(report, agriqa::run_stats({path_or_empty(o->input), path_or_empty(o->crops), path_or_empty(o->column_map)}));
  });
}

void agriqa_rebuild_options_init(agriqa_rebuild_options* o) {
  if (o) *o = agriqa_rebuild_options{};
}

agriqa_status agriqa_rebuild(const agriqa_rebuild_options* o, char** summary) {
  return guarded([&] {
    require(o, "options");
    require(o->index, "index");
    agriqa::RebuildOptions opts;
    opts.index = o->index;
    opts.model = path_or_empty(o->model);
    opts.pending = o->pending ? std::filesystem::path(o->pending)
                              : agriqa::index_file(opts.index).parent_path() / "pending.jsonl";
    opts.keep_pending = o->keep_pending != 0;
    const auto s = agriqa::run_rebuild(opts);
    emit(summary, "pending=" + std::to_string(s.pending) + " new_entries=" + std::to_string(s.new_entries) +
                      " merged_answers=" + std::to_string(s.merged_answers) + " indexed=" +
                      std::to_string(s.indexed) + " fingerprint=" + agriqa::hex64(s.content_fingerprint) + "\n");
  });
}

void agriqa_engine_options_init(agriqa_engine_options* o) {
  if (o) *o = agriqa_engine_options{};
}

agriqa_status agriqa_engine_open(const agriqa_engine_options* o, agriqa_engine** engine) {
  return guarded([&] {
    require(o, "options");
    require(engine, "engine");
    *engine = nullptr;
    agriqa::ServiceConfig cfg;
    const char* env = std::getenv("AGRIQA_CONFIG");
    if (o->config_path || (env && *env)) {
      cfg = agriqa::load_service_config(agriqa::resolve_config_path(path_or_empty(o->config_path)));
    }
    if (o->index_path) cfg.index_path = o->index_path;
    if (o->model_path) cfg.model_path = o->model_path;
    if (o->pending_path) cfg.pending_path = o->pending_path;
    if (o->ui_dir) cfg.ui_dir = o->ui_dir;
    if (o->weather_url) cfg.weather_url = o->weather_url;
    if (o->has_threshold) cfg.threshold = o->threshold;
    if (o->has_similarity_floor) cfg.similarity_floor = o->similarity_floor;
    if (o->offline_weather) cfg.offline_weather = true;
    auto handle = std::make_unique<agriqa_engine>();
    handle->engine = std::make_unique<agriqa::Engine>(std::move(cfg));
    *engine = handle.release();
  });
}

void agriqa_engine_close(agriqa_engine* engine) { delete engine; }

agriqa_status agriqa_engine_ask(agriqa_engine* engine, const char* request_json, char** response_json) {
  return guarded([&] {
    require(engine, "engine");
    require(request_json, "request");
    const auto req = agriqa::parse_ask_request(nlohmann::json::parse(request_json));
    emit(response_json, agriqa::to_json(engine->engine->ask(req)).dump());
  });
}

agriqa_status agriqa_engine_append_pair(agriqa_engine* engine, const char* pair_json, char** ack_json) {
  return guarded([&] {
    require(engine, "engine");
    require(pair_json, "pair");
    const auto j = nlohmann::json::parse(pair_json);
    if (!j.is_object()) agriqa::fail(ErrorKind::kInvalidArgument, "pair must be a JSON object");
    agriqa::PendingPair p;
    p.question = j.value("question", "");
    p.answer = j.value("answer", "");
    p.state = j.value("state", "");
    p.district = j.value("district", "");
    p.query_type = j.value("query_type", "");
    const auto ack = engine->engine->append_pair(p);
    emit(ack_json, nlohmann::ordered_json{{"status", "ok"}, {"duplicate", ack.duplicate}, {"pending", ack.pending}}.dump());
  });
}

agriqa_status agriqa_engine_health(agriqa_engine* engine, char** health_json) {
  return guarded([&] {
    require(engine, "engine");
    emit(health_json, agriqa::to_json(engine->engine->health()).dump());
  });
}

agriqa_status agriqa_engine_reload(agriqa_engine* engine) {
  return guarded([&] {
    require(engine, "engine");
    engine->engine->reload();
  });
}

int agriqa_engine_config_port(const agriqa_engine* engine) {
  return engine ? engine->engine->config().port : -1;
}

agriqa_status agriqa_server_start(agriqa_engine* engine, const char* host, int port, agriqa_server** server) {
  return guarded([&] {
    require(engine, "engine");
    require(server, "server");
    *server = nullptr;
    auto handle = std::make_unique<agriqa_server>();
    handle->server = std::make_unique<agriqa::HttpServer>(*engine->engine);
    handle->server->start(host ? host : "127.0.0.1", port);
    *server = handle.release();
  });
}

int agriqa_server_port(const agriqa_server* server) { return server ? server->server->port() : -1; }

agriqa_status agriqa_server_wait(agriqa_server* server) {
  return guarded([&] {
    require(server, "server");
    server->server->wait();
  });
}

agriqa_status agriqa_server_stop(agriqa_server* server) {
  return guarded([&] {
    require(server, "server");
    server->server->stop();
  });
}

void agriqa_server_free(agriqa_server* server) { delete server; }

}  // extern "C"
