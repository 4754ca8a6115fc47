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

/* C interface to the AgriQA question-answering pipeline.
 *
 * Every function returns an agriqa_status. On failure a message is
 * available from agriqa_last_error() on the calling thread until the next
 * call. Strings returned through char** out-parameters are owned by the
 * caller and released with agriqa_string_free(). Option structs must be
 * initialized with their *_init function before fields are set; path
 * fields left NULL take the documented default. */

#ifndef AGRIQA_AGRIQA_H_
#define AGRIQA_AGRIQA_H_

#include <stdint.h>

#if defined(_WIN32)
#define AGRIQA_API __declspec(dllexport)
#else
#define AGRIQA_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  AGRIQA_OK = 0,
  AGRIQA_ERR_INVALID_ARGUMENT = 1,
  AGRIQA_ERR_IO = 2,
  AGRIQA_ERR_PARSE = 3,
  AGRIQA_ERR_MODEL = 4,
  AGRIQA_ERR_STATE = 5,
  AGRIQA_ERR_INTERNAL = 6
} agriqa_status;

AGRIQA_API const char* agriqa_version(void);
AGRIQA_API const char* agriqa_last_error(void);
AGRIQA_API const char* agriqa_status_name(agriqa_status status);
AGRIQA_API void agriqa_string_free(char* s);

/* ---- ingest ----------------------------------------------------------- */

typedef struct {
  const char* input;        /* CSV file or directory of *.csv */
  const char* out;          /* corpus.jsonl */
  const char* column_map;   /* NULL: bundled KCC header aliases */
  const char* lexicon_dir;  /* NULL: bundled lexicons */
  double ratio;             /* train fraction, default 0.8 */
  uint64_t seed;            /* default 42 */
  int64_t spell_min_count;  /* default 2 */
  double english_threshold; /* ASCII code-point fraction, default 0.8 */
} agriqa_ingest_options;

AGRIQA_API void agriqa_ingest_options_init(agriqa_ingest_options* opts);
/* summary: "entries=<n> dropped_non_english=<n> weather=<n>" */
AGRIQA_API agriqa_status agriqa_ingest(const agriqa_ingest_options* opts, char** summary);

/* ---- train ------------------------------------------------------------ */

typedef struct {
  const char* corpus;
  const char* out;          /* model directory */
  int dims;                 /* default 75 */
  int window;               /* default 5 */
  int negatives;            /* default 5 */
  int epochs;               /* default 5 */
  double learning_rate;     /* default 0.025 */
  int64_t min_count;        /* default 1 */
  uint64_t seed;            /* default 42 */
  double sif_a;             /* default 1e-3 */
  double boost;             /* crop weight multiplier, default 3.0 */
  const char* lexicon_dir;
  const char* spell;        /* NULL: <corpus base>.spell.tsv */
  const char* gloss;        /* NULL: <lexicon_dir>/gloss.tsv */
} agriqa_train_options;

AGRIQA_API void agriqa_train_options_init(agriqa_train_options* opts);
AGRIQA_API agriqa_status agriqa_train(const agriqa_train_options* opts, char** summary);

/* ---- index ------------------------------------------------------------ */

typedef struct {
  const char* corpus;
  const char* model;
  const char* out; /* directory; index.bin and index.meta are written */
} agriqa_index_options;

AGRIQA_API void agriqa_index_options_init(agriqa_index_options* opts);
AGRIQA_API agriqa_status agriqa_index(const agriqa_index_options* opts, char** summary);

/* ---- eval ------------------------------------------------------------- */

typedef struct {
  const char* index;
  const char* model;     /* NULL: recorded in index.meta */
  const char* test;
  const char* metrics;   /* comma list of lesk,jaccard; NULL: both */
  const char* top_n;     /* comma list; NULL: "1,3,5" */
  double threshold;      /* used when has_threshold != 0 */
  int has_threshold;
  const char* labels;    /* labeled pairs CSV for calibration */
} agriqa_eval_options;

AGRIQA_API void agriqa_eval_options_init(agriqa_eval_options* opts);
AGRIQA_API agriqa_status agriqa_eval(const agriqa_eval_options* opts, char** report);

typedef struct {
  const char* train;
  const char* test;
  const char* model;     /* lexicons, a, boost and crops are taken from it */
  const char* index;     /* finds the model through index.meta when model is NULL */
  const char* dims;      /* comma list; NULL: "10,25,50,75,100" */
  int window;
  int negatives;
  int epochs;
  double learning_rate;
  int64_t min_count;
  uint64_t seed;
} agriqa_sweep_options;

AGRIQA_API void agriqa_sweep_options_init(agriqa_sweep_options* opts);
AGRIQA_API agriqa_status agriqa_sweep(const agriqa_sweep_options* opts, char** table);

/* ---- stats ------------------------------------------------------------ */

typedef struct {
  const char* input;
  const char* crops;      /* NULL: bundled crop lexicon */
  const char* column_map;
} agriqa_stats_options;

AGRIQA_API void agriqa_stats_options_init(agriqa_stats_options* opts);
AGRIQA_API agriqa_status agriqa_stats(const agriqa_stats_options* opts, char** report);

/* ---- rebuild ---------------------------------------------------------- */

typedef struct {
  const char* index;
  const char* model;   /* NULL: recorded in index.meta */
  const char* pending; /* NULL: <index dir>/pending.jsonl */
  int keep_pending;    /* nonzero: leave the pending file untouched */
} agriqa_rebuild_options;

AGRIQA_API void agriqa_rebuild_options_init(agriqa_rebuild_options* opts);
AGRIQA_API agriqa_status agriqa_rebuild(const agriqa_rebuild_options* opts, char** summary);

/* ---- engine ----------------------------------------------------------- */

typedef struct agriqa_engine agriqa_engine;

typedef struct {
  const char* config_path;  /* NULL: $AGRIQA_CONFIG, else none */
  const char* index_path;   /* overrides the config */
  const char* model_path;
  const char* pending_path;
  const char* ui_dir;
  const char* weather_url;
  double threshold;         /* used when has_threshold != 0 */
  int has_threshold;
  double similarity_floor;  /* used when has_similarity_floor != 0 */
  int has_similarity_floor;
  int offline_weather;      /* nonzero: deterministic mock provider */
} agriqa_engine_options;

AGRIQA_API void agriqa_engine_options_init(agriqa_engine_options* opts);
AGRIQA_API agriqa_status agriqa_engine_open(const agriqa_engine_options* opts, agriqa_engine** engine);
AGRIQA_API void agriqa_engine_close(agriqa_engine* engine);

/* request: {"question": ..., "state"?, "district"?, "top_k"?}
 * response: {"source": "kb"|"weather"|"escalate", "answer", ...} */
AGRIQA_API agriqa_status agriqa_engine_ask(agriqa_engine* engine, const char* request_json,
                                           char** response_json);
/* pair: {"question", "answer", "state"?, "district"?, "query_type"?} */
AGRIQA_API agriqa_status agriqa_engine_append_pair(agriqa_engine* engine, const char* pair_json,
                                                   char** ack_json);
AGRIQA_API agriqa_status agriqa_engine_health(agriqa_engine* engine, char** health_json);
AGRIQA_API agriqa_status agriqa_engine_reload(agriqa_engine* engine);
/* Port from the loaded config (8080 when unset). */
AGRIQA_API int agriqa_engine_config_port(const agriqa_engine* engine);

/* ---- HTTP server ------------------------------------------------------ */

typedef struct agriqa_server agriqa_server;

/* Serves on a background thread. port 0 picks a free port. The engine must
 * outlive the server. */
AGRIQA_API agriqa_status agriqa_server_start(agriqa_engine* engine, const char* host, int port,
                                             agriqa_server** server);
AGRIQA_API int agriqa_server_port(const agriqa_server* server);
/* Blocks until agriqa_server_stop is called from another thread. */
AGRIQA_API agriqa_status agriqa_server_wait(agriqa_server* server);
AGRIQA_API agriqa_status agriqa_server_stop(agriqa_server* server);
/* Stops if needed and releases the handle. */
AGRIQA_API void agriqa_server_free(agriqa_server* server);

#ifdef __cplusplus
}
#endif

#endif /* AGRIQA_AGRIQA_H_ */
