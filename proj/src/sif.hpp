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

// Smooth-inverse-frequency sentence embeddings with crop-entity boosting
// and first-principal-component removal.

#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "textprep.hpp"
#include "word2vec.hpp"

namespace agriqa {

struct SifModel {
  double a = 1e-3;
  double boost = 3.0;                // multiplier on crop-token weights, >= 1
  std::vector<double> pc;            // unit vector, or empty before fitting
  std::set<std::string> crop_tokens; // normalized forms

  double weight(const std::string& token, double prob) const;
};

/// Normalized crop tokens for a raw crop lexicon. Multi-word names
/// contribute every token they normalize to.
std::set<std::string> crop_tokens(const std::vector<std::string>& crops, const Normalizer& normalizer);

struct SifResult {
  std::vector<double> vector;
  bool embeddable = false;  // false when no token is in the vocabulary
};

/// Weighted average over in-vocabulary tokens:
///   v = sum_w k(w) a/(a+p(w)) v_w / sum_w k(w) a/(a+p(w)),
/// k(w) = boost for crop tokens and 1 otherwise. With `apply_pc` the
/// projection onto the model's principal component is removed. Repeated
/// tokens count once per occurrence.
SifResult sif_embed(std::span<const std::string> tokens, const WordVectorTable& table,
                    const SifModel& model, bool apply_pc);

/// First right singular vector of the uncentered matrix (rows = sentence
/// vectors), by power iteration on M^T M to a step tolerance of 1e-9. The
/// largest-magnitude component is made positive.
std::vector<double> fit_principal_component(const std::vector<std::vector<double>>& rows);

/// Builds a SifModel and fits its principal component on the (unremoved)
/// embeddings of the given training sentences.
SifModel fit_sif_model(const WordVectorTable& table, const Sentences& training_sentences, double a,
                       double boost, std::set<std::string> crops);

/// Binds an index to the exact table and SIF parameters it was built with.
std::uint64_t model_fingerprint(const WordVectorTable& table, const SifModel& model);

class Embedder {
 public:
  Embedder(const Normalizer& normalizer, const WordVectorTable& table, const SifModel& model)
      : normalizer_(&normalizer), table_(&table), model_(&model) {}

  /// normalize -> sif_embed with PC removal -> unit L2 norm. Unembeddable
  /// text yields the zero vector with embeddable=false.
  SifResult embed_question(std::string_view raw_text) const;
  SifResult embed_tokens(std::span<const std::string> tokens) const;

  const Normalizer& normalizer() const { return *normalizer_; }
  int dim() const { return table_->dim; }

 private:
  const Normalizer* normalizer_;
  const WordVectorTable* table_;
  const SifModel* model_;
};

double l2_norm(std::span<const double> v);

}  // namespace agriqa
