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

#include "eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <unordered_set>

#include "csv.hpp"
#include "error.hpp"
#include "fileio.hpp"

namespace agriqa {

namespace {

bool parse_label(std::string_view raw) {
  std::string s(trim(raw));
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "1" || s == "true" || s == "yes") return true;
  if (s == "0" || s == "false" || s == "no") return false;
  fail(ErrorKind::kParse, "labeled pairs: bad is_correct value '" + std::string(raw) + "'");
}

std::string fixed6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", x);
  return buf;
}

std::string percent2(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f%%", 100.0 * x);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

}  // namespace

std::vector<LabeledPair> parse_labeled_pairs(std::string_view csv_text) {
  const auto rows = csv::parse(csv_text);
  if (rows.empty()) fail(ErrorKind::kParse, "labeled pairs file is empty");
  const std::vector<std::string> expected = {"test_question", "predicted_question", "is_correct"};
  std::vector<std::string> header;
  for (const auto& f : rows.front().fields) header.emplace_back(trim(f));
  if (header != expected) {
    fail(ErrorKind::kParse, "labeled pairs header must be test_question,predicted_question,is_correct");
  }
  std::vector<LabeledPair> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.malformed || r.fields.size() != 3) {
      fail(ErrorKind::kParse, "labeled pairs row " + std::to_string(i + 1) + " is malformed");
    }
    out.push_back(LabeledPair{r.fields[0], r.fields[1], parse_label(r.fields[2])});
  }
  return out;
}

std::vector<LabeledPair> load_labeled_pairs(const std::filesystem::path& path) {
  return parse_labeled_pairs(read_file(path));
}

Calibration calibrate_threshold(const std::vector<double>& scores, const std::vector<bool>& labels) {
  if (scores.size() != labels.size()) fail(ErrorKind::kInvalidArgument, "scores and labels differ in length");
  const auto positives = std::count(labels.begin(), labels.end(), true);
  if (positives == 0 || positives == static_cast<std::ptrdiff_t>(labels.size())) {
    fail(ErrorKind::kInvalidArgument, "threshold calibration needs both correct and incorrect labels");
  }
  std::vector<double> distinct(scores);
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  std::vector<double> candidates;
  for (std::size_t i = 1; i < distinct.size(); ++i) candidates.push_back(0.5 * (distinct[i - 1] + distinct[i]));
  if (candidates.empty()) candidates.push_back(distinct.front());

  // Sweep candidates in ascending order; with strict improvement only, the
  // smallest maximizer is kept.
  Calibration best{candidates.front(), -1.0};
  for (double t : candidates) {
    std::size_t right = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) right += (scores[i] >= t) == labels[i];
    const double acc = static_cast<double>(right) / static_cast<double>(scores.size());
    if (acc > best.accuracy) best = Calibration{t, acc};
  }
  return best;
}

Calibration calibrate_threshold(const std::vector<LabeledPair>& pairs, Metric metric,
                                const Normalizer& normalizer, const GlossLexicon& lexicon) {
  std::vector<double> scores;
  std::vector<bool> labels;
  for (const auto& p : pairs) {
    scores.push_back(score(metric, normalizer.normalize_words(p.test_question),
                           normalizer.normalize_words(p.predicted_question), lexicon));
    labels.push_back(p.is_correct);
  }
  return calibrate_threshold(scores, labels);
}

EvalReport evaluate_topn(const QuestionIndex& index, const std::vector<CanonicalEntry>& test,
                         const Embedder& embedder, const GlossLexicon& lexicon,
                         const std::vector<MetricSpec>& metrics, std::vector<int> n_values) {
  if (test.empty()) fail(ErrorKind::kInvalidArgument, "empty test set");
  if (metrics.empty()) fail(ErrorKind::kInvalidArgument, "no metric to evaluate");
  if (n_values.empty()) fail(ErrorKind::kInvalidArgument, "no N values for Top-N");
  for (int n : n_values) {
    if (n <= 0) fail(ErrorKind::kInvalidArgument, "Top-N values must be positive");
  }
  std::sort(n_values.begin(), n_values.end());
  n_values.erase(std::unique(n_values.begin(), n_values.end()), n_values.end());

  std::unordered_set<std::int64_t> indexed;
  for (const auto& e : index.entries()) indexed.insert(e.entry_id);
  for (const auto& e : test) {
    if (indexed.contains(e.entry_id)) {
      fail(ErrorKind::kInvalidArgument,
           "test entry " + std::to_string(e.entry_id) + " is also in the index (train/test overlap)");
    }
  }

  EvalReport report;
  report.n_values = n_values;
  report.index_entries = index.size();
  report.test_entries = test.size();
  const auto k = static_cast<std::size_t>(n_values.back());

  std::vector<std::vector<std::size_t>> hits(metrics.size(), std::vector<std::size_t>(n_values.size(), 0));
  std::vector<double> top1_sum(metrics.size(), 0.0);
  for (const auto& e : test) {
    const auto query_tokens = e.tokens();
    const auto emb = embedder.embed_tokens(query_tokens);
    if (!emb.embeddable) {
      ++report.skipped;
      continue;
    }
    ++report.evaluated;
    const auto matches = top_k(index, emb.vector, k);
    for (std::size_t m = 0; m < metrics.size(); ++m) {
      // Rank of the first match that clears the threshold, if any.
      std::size_t first_hit = matches.size();
      for (std::size_t r = 0; r < matches.size(); ++r) {
        const double s = score(metrics[m].metric, query_tokens, index.entry(matches[r].row).tokens(), lexicon);
        if (r == 0) top1_sum[m] += s;
        if (s >= metrics[m].threshold && first_hit == matches.size()) first_hit = r;
      }
      for (std::size_t j = 0; j < n_values.size(); ++j) {
        if (first_hit < static_cast<std::size_t>(n_values[j])) ++hits[m][j];
      }
    }
  }

  for (std::size_t m = 0; m < metrics.size(); ++m) {
    MetricRow row;
    row.metric = metrics[m].metric;
    row.threshold = metrics[m].threshold;
    for (std::size_t count : hits[m]) {
      row.hit_rates.push_back(static_cast<double>(count) / static_cast<double>(test.size()));
    }
    row.mean_top1_score = report.evaluated ? top1_sum[m] / static_cast<double>(report.evaluated) : 0.0;
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::string format_report(const EvalReport& report) {
  std::string out;
  out += pad("metric", 10) + pad("threshold", 11);
  for (int n : report.n_values) out += pad("Top-" + std::to_string(n), 10);
  out += "mean_top1\n";
  for (const auto& row : report.rows) {
    out += pad(std::string(metric_name(row.metric)), 10) + pad(fixed6(row.threshold), 11);
    for (double h : row.hit_rates) out += pad(percent2(h), 10);
    out += fixed6(row.mean_top1_score) + "\n";
  }
  out += "\n";
  out += "index_entries=" + std::to_string(report.index_entries) + "\n";
  out += "test_entries=" + std::to_string(report.test_entries) + "\n";
  out += "evaluated=" + std::to_string(report.evaluated) + "\n";
  out += "skipped=" + std::to_string(report.skipped) + "\n";
  for (const auto& row : report.rows) {
    const std::string name(metric_name(row.metric));
    out += name + ".threshold=" + fixed6(row.threshold) + "\n";
    for (std::size_t j = 0; j < report.n_values.size(); ++j) {
      out += name + ".top" + std::to_string(report.n_values[j]) + "=" + fixed6(row.hit_rates[j]) + "\n";
    }
    out += name + ".mean_top1=" + fixed6(row.mean_top1_score) + "\n";
  }
  return out;
}

Sentences training_sentences(const std::vector<CanonicalEntry>& entries) {
  Sentences s;
  s.reserve(entries.size());
  for (const auto& e : entries) {
    auto t = e.tokens();
    if (!t.empty()) s.push_back(std::move(t));
  }
  return s;
}

std::vector<SweepRow> dimension_sweep(const std::vector<CanonicalEntry>& train,
                                      const std::vector<CanonicalEntry>& test,
                                      const std::vector<int>& dims, const SweepConfig& cfg,
                                      const Normalizer& normalizer, const GlossLexicon& lexicon) {
  if (dims.empty()) fail(ErrorKind::kInvalidArgument, "dimension sweep needs at least one dimension");
  const auto sentences = training_sentences(train);
  std::vector<SweepRow> rows;
  for (int dim : dims) {
    TrainConfig tc = cfg.train;
    tc.dim = dim;
    const auto table = train_word2vec(sentences, tc);
    const auto model = fit_sif_model(table, sentences, cfg.a, cfg.boost, cfg.crops);
    const Embedder embedder(normalizer, table, model);
    const auto index = build_index(train, embedder, model_fingerprint(table, model));
    const auto report = evaluate_topn(index, test, embedder, lexicon, {MetricSpec{Metric::kLesk, kDefaultThreshold}}, {1});
    rows.push_back(SweepRow{dim, report.rows[0].mean_top1_score, report.rows[0].hit_rates[0]});
  }
  return rows;
}

std::string format_sweep(const std::vector<SweepRow>& rows) {
  std::string out = "dim\tmean_lesk_top1\ttop1_hit_rate\n";
  for (const auto& r : rows) {
    out += std::to_string(r.dim) + "\t" + fixed6(r.mean_lesk_top1) + "\t" + fixed6(r.top1_hit_rate) + "\n";
  }
  return out;
}

}  // namespace agriqa
