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

// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
// failure. `--write-golden` regenerates the checked-in toy eval report.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "engine.hpp"
#include "error.hpp"
#include "fileio.hpp"
#include "pipeline.hpp"
#include "toy_fixture.hpp"

namespace agriqa {
namespace {

using namespace test_support;
using Words = std::vector<std::string>;

struct Outcome {
  bool ok = true;
  std::string detail;
};

// Collects failures with a short reason; the first few are shown.
class Checker {
 public:
  void expect(bool cond, const std::string& what) {
    if (cond) return;
    ++failures_;
    if (failures_ <= 3) notes_ += (notes_.empty() ? "" : "; ") + what;
  }
  Outcome done(std::string detail = {}) const {
    if (failures_ == 0) return {true, std::move(detail)};
    return {false, std::to_string(failures_) + " failure(s): " + notes_};
  }

 private:
  int failures_ = 0;
  std::string notes_;
};

int run(const std::string& name, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("threw: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (budget_s > 0 && secs >= budget_s) {
    out.ok = false;
    out.detail += " (over the " + std::to_string(static_cast<int>(budget_s)) + " s budget)";
  }
  std::printf("%s %-22s %8.3fs  %s\n", out.ok ? "PASS" : "FAIL", name.c_str(), secs, out.detail.c_str());
  std::fflush(stdout);
  return out.ok ? 0 : 1;
}

fs::path golden_path() { return test_dir() / "golden" / "toy_eval_report.txt"; }

EvalOptions golden_eval_options(const ToyArtifacts& a) {
  EvalOptions o;
  o.index = a.index;
  o.test = a.test;
  o.labels = toy_labels();
  return o;
}

// ---- metric exactness ------------------------------------------------------

Outcome metric_exactness() {
  const auto lex = GlossLexicon::parse("wheat\tcereal grain crop\npaddy\tcereal grain rice\n", {});
  Checker c;
  c.expect(modified_jaccard({"market", "rate", "wheat"}, {"market", "rate", "wheat"}) == 0.75, "jaccard identical");
  c.expect(modified_jaccard({"market", "rate", "wheat"}, {"urea", "dose", "paddy"}) == 0.0, "jaccard disjoint");
  c.expect(modified_jaccard({"market", "rate", "wheat"}, {"market", "rate", "paddy"}) == 0.5, "jaccard partial");
  c.expect(modified_jaccard({}, {}) == 0.0, "jaccard empty");
  c.expect(modified_lesk({}, {}, lex) == 0.0, "lesk empty");
  c.expect(modified_lesk({"wheat"}, {"wheat"}, lex) == 0.8, "lesk identical");
  c.expect(modified_lesk({"wheat"}, {"paddy"}, lex) == 0.4, "lesk shared gloss");
  return c.done("0.75 0 0.5 0 | 0 0.8 0.4");
}

// ---- SGNS gradient check ---------------------------------------------------

double log_sigmoid(double x) { return x >= 0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x)); }

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

// Written out independently of the library's loss.
double oracle_loss(const std::vector<double>& c, const std::vector<double>& o,
                   const std::vector<std::vector<double>>& negs) {
  double l = -log_sigmoid(dot(o, c));
  for (const auto& n : negs) l -= log_sigmoid(-dot(n, c));
  return l;
}

double rel_error(const std::vector<double>& a, const std::vector<double>& n) {
  double diff = 0, na = 0, nn = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff += (a[i] - n[i]) * (a[i] - n[i]);
    na += a[i] * a[i];
    nn += n[i] * n[i];
  }
  return std::sqrt(diff) / std::max({std::sqrt(na), std::sqrt(nn), 1e-12});
}

Outcome gradient_check() {
  constexpr int kDim = 5;
  constexpr double h = 1e-5;
  std::mt19937_64 rng(42);
  std::normal_distribution<double> normal(0.0, 0.5);
  std::uniform_int_distribution<int> neg_count(1, 5);
  Checker c;
  double worst = 0.0;
  for (int inst = 0; inst < 100; ++inst) {
    auto draw = [&] {
      std::vector<double> v(kDim);
      for (auto& x : v) x = normal(rng);
      return v;
    };
    std::vector<double> center = draw(), context = draw();
    std::vector<std::vector<double>> negs(static_cast<std::size_t>(neg_count(rng)));
    for (auto& n : negs) n = draw();

    std::vector<std::span<const double>> neg_spans(negs.begin(), negs.end());
    const auto g = sgns_gradient(center, context, neg_spans);

    // Central differences of the oracle loss, one block at a time.
    auto numeric = [&](std::vector<double>& block) {
      std::vector<double> out(kDim);
      for (int i = 0; i < kDim; ++i) {
        const double keep = block[i];
        block[i] = keep + h;
        const double up = oracle_loss(center, context, negs);
        block[i] = keep - h;
        const double down = oracle_loss(center, context, negs);
        block[i] = keep;
        out[i] = (up - down) / (2 * h);
      }
      return out;
    };
    std::vector<double> errs = {rel_error(g.center, numeric(center)), rel_error(g.context, numeric(context))};
    for (std::size_t k = 0; k < negs.size(); ++k) errs.push_back(rel_error(g.negatives[k], numeric(negs[k])));
    c.expect(std::abs(g.loss - oracle_loss(center, context, negs)) < 1e-12, "loss mismatch at " + std::to_string(inst));
    for (double e : errs) {
      worst = std::max(worst, e);
      c.expect(e < 1e-4, "instance " + std::to_string(inst) + " rel err " + std::to_string(e));
    }
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "100 instances, max rel err %.2e", worst);
  return c.done(buf);
}

// ---- SIF contract ----------------------------------------------------------

Outcome sif_contract() {
  TempDir dir;
  const auto art = build_toy(dir.path());
  const auto model = load_model(art.model);
  const auto& table = model.table;
  Checker c;

  double single_err = 0.0;
  for (std::size_t i = 0; i < table.size(); ++i) {
    const Words one = {table.words[i]};
    const auto r = sif_embed(one, table, model.sif, /*apply_pc=*/false);
    const auto v = table.vector(static_cast<int>(i));
    for (int d = 0; d < table.dim; ++d) single_err = std::max(single_err, std::abs(r.vector[d] - v[d]));
  }
  c.expect(single_err <= 1e-12, "single-token error " + std::to_string(single_err));

  const auto sentences = training_sentences(load_entries(art.train));
  std::mt19937_64 rng(42);
  double worst_proj = 0.0;
  std::size_t embedded = 0;
  for (const auto& s : sentences) {
    Words shuffled = s;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    for (bool pc : {false, true}) {
      const auto a = sif_embed(s, table, model.sif, pc);
      const auto b = sif_embed(shuffled, table, model.sif, pc);
      c.expect(a.vector == b.vector, "order changed the embedding");
    }
    const auto post = sif_embed(s, table, model.sif, true);
    if (!post.embeddable) continue;
    ++embedded;
    worst_proj = std::max(worst_proj, std::abs(dot(post.vector, model.sif.pc)));
  }
  c.expect(worst_proj < 1e-6, "max |<v,pc>| " + std::to_string(worst_proj));
  char buf[128];
  std::snprintf(buf, sizeof buf, "%zu words, %zu sentences, single-token err %.1e, max |<v,pc>| %.1e", table.size(),
                embedded, single_err, worst_proj);
  return c.done(buf);
}

// ---- index oracle equivalence -----------------------------------------------

Outcome index_oracle() {
  constexpr int kDim = 75;
  std::mt19937_64 rng(42);
  std::normal_distribution<double> normal;
  auto unit = [&] {
    std::vector<float> v(kDim);
    double n = 0;
    for (auto& x : v) {
      x = static_cast<float>(normal(rng));
      n += static_cast<double>(x) * x;
    }
    for (auto& x : v) x = static_cast<float>(x / std::sqrt(n));
    return v;
  };
  // 1000 rows drawn from 700 distinct vectors, so duplicate rows force ties.
  std::vector<std::vector<float>> pool(700);
  for (auto& p : pool) p = unit();
  std::vector<std::int64_t> ids(1000);
  std::iota(ids.begin(), ids.end(), 1);
  std::shuffle(ids.begin(), ids.end(), rng);
  std::vector<CanonicalEntry> entries;
  std::vector<float> rows;
  std::vector<std::vector<float>> row_vecs;
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  for (std::size_t r = 0; r < 1000; ++r) {
    const auto& v = r < pool.size() ? pool[r] : pool[pick(rng)];
    CanonicalEntry e;
    e.entry_id = ids[r];
    e.canonical_question = "q" + std::to_string(ids[r]);
    entries.push_back(e);
    rows.insert(rows.end(), v.begin(), v.end());
    row_vecs.push_back(v);
  }
  const QuestionIndex index(kDim, entries, rows, 0);

  Checker c;
  std::size_t ties_seen = 0;
  for (int q = 0; q < 100; ++q) {
    std::vector<double> query(kDim);
    if (q % 2 == 0) {
      const auto& v = row_vecs[pick(rng)];
      std::copy(v.begin(), v.end(), query.begin());
    } else {
      for (auto& x : query) x = normal(rng);
    }
    std::vector<std::pair<double, std::int64_t>> all;
    for (std::size_t r = 0; r < row_vecs.size(); ++r) {
      double s = 0;
      for (int d = 0; d < kDim; ++d) s += static_cast<double>(row_vecs[r][d]) * query[d];
      all.emplace_back(std::clamp(s, -1.0, 1.0), entries[r].entry_id);
    }
    std::sort(all.begin(), all.end(), [](const auto& x, const auto& y) {
      return x.first != y.first ? x.first > y.first : x.second < y.second;
    });
    for (std::size_t i = 1; i < 10; ++i) ties_seen += all[i].first == all[i - 1].first;
    for (std::size_t k : {1u, 3u, 5u, 10u}) {
      const auto got = top_k(index, query, k);
      bool same = got.size() == k;
      for (std::size_t i = 0; same && i < k; ++i) {
        same = got[i].entry_id == all[i].second && got[i].similarity == all[i].first;
      }
      c.expect(same, "query " + std::to_string(q) + " k=" + std::to_string(k));
    }
  }
  c.expect(ties_seen > 0, "no ties exercised");
  return c.done("100 queries x k{1,3,5,10}, " + std::to_string(ties_seen) + " tied neighbours in top 10");
}

// ---- self-retrieval --------------------------------------------------------

// The model is trained on every entry here, so no canonical question is
// out of vocabulary.
Outcome self_retrieval() {
  TempDir dir;
  ToyArtifacts art;
  art.corpus = dir / "corpus.jsonl";
  IngestOptions ingest;
  ingest.input = toy_csv();
  ingest.out = art.corpus;
  run_ingest(ingest);
  TrainOptions train;
  train.corpus = art.corpus;
  train.out = art.model = dir / "model";
  run_train(train);
  IndexOptions idx;
  idx.corpus = art.corpus;
  idx.model = art.model;
  idx.out = art.index = dir / "idx";
  run_index(idx);

  const auto model = load_model(art.model);
  const auto index = load_index(index_file(art.index), model.fingerprint);
  const auto embedder = model.embedder();
  const auto entries = load_entries(art.corpus);
  Checker c;
  std::size_t hits = 0;
  for (const auto& e : entries) {
    const auto q = embedder.embed_question(e.canonical_question);
    const bool hit = q.embeddable && top_k(index, q.vector, 1).front().entry_id == e.entry_id;
    hits += hit;
    c.expect(hit, "entry " + std::to_string(e.entry_id) + " '" + e.canonical_question + "'");
  }
  return c.done(std::to_string(hits) + "/" + std::to_string(entries.size()) + " top-1 self matches");
}

// ---- entity boost ----------------------------------------------------------

// The index holds, for each query crop X, "X mandi price" and "X nutrient
// dose"; two other crops carry the query's own wording ("market rate of Y",
// "fertilizer for Y"). Queries are "market rate of X" and "fertilizer for
// X": the crop is the only word they share with the right entry. Each crop
// and each template word then occurs twice, so their SIF weights are equal
// and only the boost separates them.
struct BoostSetup {
  Normalizer normalizer;
  std::vector<CanonicalEntry> entries;
  Sentences sentences;
  std::set<std::string> crops;
  std::vector<std::string> query_crops;
};

BoostSetup boost_setup() {
  const auto lex = LexiconPaths::in(default_lexicon_dir());
  BoostSetup s;
  s.normalizer = Normalizer(TextLexicons{load_stopwords(lex.stopwords), SynonymMap::load(lex.synonyms), {}});
  const auto crop_names = load_crop_lexicon(lex.crops);
  s.crops = crop_tokens(crop_names, s.normalizer);
  std::vector<std::string> single;
  for (const auto& name : crop_names) {
    if (s.normalizer.normalize_words(name).size() == 1) single.push_back(name);
  }
  if (single.size() < 22) fail(ErrorKind::kInvalidArgument, "crop lexicon too small for the template set");
  s.query_crops.assign(single.begin(), single.begin() + 20);
  const std::vector<std::string> others(single.begin() + 20, single.begin() + 22);

  std::int64_t id = 1;
  auto add = [&](const std::string& text, const std::string& crop) {
    CanonicalEntry e;
    e.entry_id = id++;
    e.canonical_question = join(s.normalizer.normalize_words(text), " ");
    e.raw_questions = {text};
    e.answers = {crop};
    s.entries.push_back(e);
  };
  for (const auto& x : s.query_crops) {
    add(x + " mandi price", x);
    add(x + " nutrient dose", x);
  }
  for (const auto& y : others) {
    add("market rate of " + y, y);
    add("fertilizer for " + y, y);
  }
  s.sentences = training_sentences(s.entries);
  return s;
}

// Top-1 crop-match rate per template family.
std::map<std::string, double> crop_match(const BoostSetup& s, double boost) {
  TrainConfig cfg;
  const auto table = train_word2vec(s.sentences, cfg);
  const auto sif = fit_sif_model(table, s.sentences, 1e-3, boost, s.crops);
  const Embedder embedder(s.normalizer, table, sif);
  const auto index = build_index(s.entries, embedder, model_fingerprint(table, sif));
  std::map<std::string, double> rate;
  for (const std::string family : {"market rate of ", "fertilizer for "}) {
    int hits = 0;
    for (const auto& x : s.query_crops) {
      const auto q = embedder.embed_question(family + x);
      if (!q.embeddable) continue;
      hits += index.entry(top_k(index, q.vector, 1).front().row).answers.front() == x;
    }
    rate[family] = hits / static_cast<double>(s.query_crops.size());
  }
  return rate;
}

Outcome entity_boost() {
  const auto s = boost_setup();
  const auto plain = crop_match(s, 1.0);
  const auto boosted = crop_match(s, 3.0);
  const auto again = crop_match(s, 3.0);
  Checker c;
  bool strictly = false;
  std::string detail;
  for (const auto& [family, r1] : plain) {
    const double r3 = boosted.at(family);
    c.expect(r3 >= r1, "'" + family + "X' b=3 below b=1");
    strictly = strictly || r3 > r1;
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s'%sX' b=1 %.2f b=3 %.2f", detail.empty() ? "" : "; ", family.c_str(), r1, r3);
    detail += buf;
  }
  c.expect(strictly, "no family improved (" + detail + ")");
  c.expect(again == boosted, "not deterministic");
  return c.done(detail);
}

// ---- golden run ------------------------------------------------------------

std::string golden_report(const fs::path& root) {
  const auto art = build_toy(root);
  return run_eval(golden_eval_options(art));
}

// Top-1 <= Top-3 <= Top-5 for every metric, read from the key=value lines.
bool monotone(const std::string& report) {
  std::map<std::string, double> kv;
  std::istringstream in(report);
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq != std::string::npos) kv[line.substr(0, eq)] = std::atof(line.c_str() + eq + 1);
  }
  bool any = false;
  for (const std::string m : {"lesk", "jaccard"}) {
    if (!kv.contains(m + ".top1")) continue;
    any = true;
    if (!(kv[m + ".top1"] <= kv[m + ".top3"] && kv[m + ".top3"] <= kv[m + ".top5"])) return false;
  }
  return any;
}

Outcome golden_run() {
  TempDir dir;
  const auto report = golden_report(dir.path());
  Checker c;
  const auto expected = read_file(golden_path());
  c.expect(report == expected, "report differs from " + golden_path().string());
  c.expect(monotone(report), "Top-1 <= Top-3 <= Top-5 violated or no rows found");
  return c.done(std::to_string(report.size()) + " bytes identical");
}

// ---- routing ---------------------------------------------------------------

AskResponse ask(const Engine& engine, const std::string& question) {
  AskRequest r;
  r.question = question;
  return engine.ask(r);
}

Outcome routing() {
  TempDir dir;
  const auto art = build_toy(dir.path(), {}, 3.0, /*index_all=*/true);
  ServiceConfig cfg;
  cfg.index_path = art.index;
  cfg.offline_weather = true;
  const Engine engine(cfg);
  Checker c;

  const auto weather = ask(engine, "what is the weather");
  c.expect(weather.source == Source::kWeather, "weather routed to " + std::string(source_name(weather.source)));

  const auto gibberish = ask(engine, "xqzv blorft gnarp wizzle");
  c.expect(gibberish.source == Source::kEscalate, "gibberish routed to " + std::string(source_name(gibberish.source)));

  const auto kb = ask(engine, "what is the market rate of wheat?");
  c.expect(kb.source == Source::kKb, "market rate routed to " + std::string(source_name(kb.source)));
  c.expect(kb.answer == "wheat market rate \xE2\x80\x93 1800 \xE2\x80\x93 \xE2\x80\x93 2200 rups pq",
           "answer was '" + kb.answer + "'");
  c.expect(kb.matched_question.value_or("") == "wheat market rate",
           "matched '" + kb.matched_question.value_or("") + "'");
  return c.done("weather / escalate / kb");
}

// ---- dimension sweep -------------------------------------------------------

Outcome dimension_sweep_check() {
  TempDir dir;
  const auto art = build_toy(dir.path());
  SweepOptions o;
  o.train = art.train;
  o.test = art.test;
  o.model = art.model;
  const auto first = run_sweep(o);
  const auto second = run_sweep(o);
  Checker c;
  c.expect(first == second, "sweep output not deterministic");
  std::istringstream in(first);
  std::string line;
  std::getline(in, line);
  c.expect(line == "dim\tmean_lesk_top1\ttop1_hit_rate", "header '" + line + "'");
  std::vector<int> dims;
  while (std::getline(in, line)) {
    std::istringstream f(line);
    int dim = 0;
    double mean = NAN, hit = NAN;
    f >> dim >> mean >> hit;
    dims.push_back(dim);
    c.expect(std::isfinite(mean) && mean >= 0 && mean < 1, "mean_lesk_top1 out of range at dim " + std::to_string(dim));
    c.expect(std::isfinite(hit) && hit >= 0 && hit <= 1, "top1_hit_rate out of range at dim " + std::to_string(dim));
  }
  c.expect(dims == std::vector<int>{10, 25, 50, 75, 100}, "unexpected dims");
  std::string flat = first;
  std::replace(flat.begin(), flat.end(), '\n', ' ');
  std::replace(flat.begin(), flat.end(), '\t', ',');
  return c.done(flat);
}

}  // namespace
}  // namespace agriqa

int main(int argc, char** argv) {
  using namespace agriqa;
  if (argc > 1 && std::string(argv[1]) == "--write-golden") {
    test_support::TempDir dir;
    write_file(golden_path(), golden_report(dir.path()));
    std::printf("wrote %s\n", golden_path().c_str());
    return 0;
  }
  int failed = 0;
  failed += run("metric_exactness", 1, metric_exactness);
  failed += run("gradient_check", 5, gradient_check);
  failed += run("sif_contract", 10, sif_contract);
  failed += run("index_oracle", 10, index_oracle);
  failed += run("self_retrieval", 0, self_retrieval);
  failed += run("entity_boost", 0, entity_boost);
  failed += run("golden_run", 120, golden_run);
  failed += run("routing", 0, routing);
  failed += run("dimension_sweep", 0, dimension_sweep_check);
  std::printf("%d of 9 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
