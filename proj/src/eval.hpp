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

// Held-out evaluation: threshold calibration from labeled pairs,
// threshold-gated Top-N hit rates and the dimension sweep.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "corpus.hpp"
#include "index.hpp"
#include "ranking.hpp"
#include "sif.hpp"
#include "word2vec.hpp"

namespace agriqa {

// Used when no threshold is configured and no labels are supplied.
inline constexpr double kDefaultThreshold = 0.5;

struct LabeledPair {
  std::string test_question;
  std::string predicted_question;
  bool is_correct = false;
};

/// CSV with header test_question,predicted_question,is_correct. Labels
/// accept 1/0, true/false and yes/no in any case.
std::vector<LabeledPair> parse_labeled_pairs(std::string_view csv_text);
std::vector<LabeledPair> load_labeled_pairs(const std::filesystem::path& path);

struct Calibration {
  double threshold = 0.0;
  double accuracy = 0.0;
};

/// Candidate thresholds are the midpoints between consecutive distinct
/// scores (the score itself when all scores are equal). Picks the candidate
/// with the best accuracy of (score >= t) against the labels, the smaller t
/// on ties. Throws unless both labels occur.
Calibration calibrate_threshold(const std::vector<double>& scores, const std::vector<bool>& labels);

/// Scores each pair with `metric` on normalized text, then calibrates.
Calibration calibrate_threshold(const std::vector<LabeledPair>& pairs, Metric metric,
                                const Normalizer& normalizer, const GlossLexicon& lexicon);

struct MetricSpec {
  Metric metric = Metric::kLesk;
  double threshold = kDefaultThreshold;
};

struct MetricRow {
  Metric metric = Metric::kLesk;
  double threshold = 0.0;
  std::vector<double> hit_rates;  // parallel to EvalReport::n_values
  double mean_top1_score = 0.0;   // over evaluated entries
};

struct EvalReport {
  std::vector<int> n_values;
  std::vector<MetricRow> rows;
  std::size_t index_entries = 0;
  std::size_t test_entries = 0;
  std::size_t evaluated = 0;
  std::size_t skipped = 0;  // unembeddable test questions; they count as misses
};

/// For each test entry the top max(n_values) matches are retrieved; the
/// entry is a hit at N when one of its first N matches scores at least the
/// metric's threshold against the test question. Throws on an empty test
/// set, on empty or non-positive n_values, and when a test entry_id is
/// present in the index.
EvalReport evaluate_topn(const QuestionIndex& index, const std::vector<CanonicalEntry>& test,
                         const Embedder& embedder, const GlossLexicon& lexicon,
                         const std::vector<MetricSpec>& metrics, std::vector<int> n_values);

/// Human table followed by key=value lines. No timestamps, so output is
/// byte-stable for fixed inputs.
std::string format_report(const EvalReport& report);

struct SweepConfig {
  TrainConfig train;  // dim is overridden per row
  double a = 1e-3;
  double boost = 3.0;
  std::set<std::string> crops;  // normalized crop tokens
};

struct SweepRow {
  int dim = 0;
  double mean_lesk_top1 = 0.0;
  double top1_hit_rate = 0.0;  // at kDefaultThreshold, for reference
};

/// Trains one model per dimension on `train` (same seed for all), indexes
/// `train` and evaluates `test`.
std::vector<SweepRow> dimension_sweep(const std::vector<CanonicalEntry>& train,
                                      const std::vector<CanonicalEntry>& test,
                                      const std::vector<int>& dims, const SweepConfig& cfg,
                                      const Normalizer& normalizer, const GlossLexicon& lexicon);

// Tab-separated "dim mean_lesk_top1 top1_hit_rate" with a header row.
std::string format_sweep(const std::vector<SweepRow>& rows);

// One training sentence per entry: its canonical tokens.
Sentences training_sentences(const std::vector<CanonicalEntry>& entries);

}  // namespace agriqa
