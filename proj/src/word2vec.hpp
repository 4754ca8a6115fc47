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

// Skip-gram with negative sampling, trained by plain SGD.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace agriqa {

using Sentences = std::vector<std::vector<std::string>>;

struct WordVectorTable {
  int dim = 0;
  std::vector<std::string> words;                  // id -> word
  std::unordered_map<std::string, int> vocab;      // word -> id
  std::vector<std::int64_t> counts;                // id -> corpus count
  std::vector<double> unigram_prob;                // id -> count / total
  std::vector<double> input_vectors;               // |V| x dim, row-major
  std::vector<double> output_vectors;              // training only; may be empty

  std::size_t size() const { return words.size(); }
  std::optional<int> id(const std::string& word) const;
  std::span<const double> vector(int id) const;
  std::span<double> vector(int id);

  // Rebuilds `vocab` and `unigram_prob` from `words` and `counts`.
  void reindex();
};

struct TrainConfig {
  int dim = 75;
  int window = 5;
  int negatives = 5;
  int epochs = 5;
  double learning_rate = 0.025;  // decays linearly towards learning_rate * 1e-4
  std::int64_t min_count = 1;
  std::uint64_t seed = 42;
};

struct TrainStats {
  std::vector<double> epoch_mean_loss;
  std::int64_t pairs = 0;
};

/// Deterministic for a given corpus and config: single thread, every
/// random draw comes from one seeded mt19937_64.
WordVectorTable train_word2vec(const Sentences& sentences, const TrainConfig& cfg,
                               TrainStats* stats = nullptr);

struct SgnsGradient {
  std::vector<double> center;
  std::vector<double> context;
  std::vector<std::vector<double>> negatives;
  double loss = 0.0;
};

/// Loss  -log s(o.c) - sum_i log s(-n_i.c)  and its gradients with respect to
/// the center vector c, the context vector o and every negative n_i.
SgnsGradient sgns_gradient(std::span<const double> center, std::span<const double> context,
                           const std::vector<std::span<const double>>& negatives);

double sgns_loss(std::span<const double> center, std::span<const double> context,
                 const std::vector<std::span<const double>>& negatives);

/// p(w) = count(w) / total tokens.
std::map<std::string, double> compute_unigram_probs(const Sentences& sentences);

// "vocab_size dim" header, then "word v1 ... v_dim" per line with 17
// significant digits, so a save/load round trip is exact.
std::string serialize_vectors(const WordVectorTable& table);
// Counts go in a separate word<TAB>count file.
std::string serialize_counts(const WordVectorTable& table);
WordVectorTable parse_vectors(std::string_view vectors_text, std::string_view counts_text);

}  // namespace agriqa
