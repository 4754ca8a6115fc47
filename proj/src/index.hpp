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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "sif.hpp"

namespace agriqa {

/// u.v / (|u| |v|), clamped to [-1, 1]. Throws on a zero vector.
double cosine(std::span<const double> u, std::span<const double> v);

struct Match {
  std::int64_t entry_id = 0;
  double similarity = 0.0;
  std::string matched_question;
  std::size_t row = 0;
};

// Immutable once built. Row i holds the unit-norm embedding of entries[i].
class QuestionIndex {
 public:
  QuestionIndex() = default;
  QuestionIndex(int dim, std::vector<CanonicalEntry> entries, std::vector<float> vectors,
                std::uint64_t model_fingerprint, std::size_t excluded = 0);

  int dim() const { return dim_; }
  std::size_t size() const { return entries_.size(); }
  const std::vector<CanonicalEntry>& entries() const { return entries_; }
  const CanonicalEntry& entry(std::size_t row) const { return entries_[row]; }
  std::span<const float> row(std::size_t i) const;
  std::uint64_t model_fingerprint() const { return model_fingerprint_; }
  std::size_t excluded() const { return excluded_; }

  /// Hash over rows, entries and the model fingerprint; changes on rebuild
  /// whenever the content does.
  std::uint64_t content_fingerprint() const;

 private:
  int dim_ = 0;
  std::vector<CanonicalEntry> entries_;
  std::vector<float> vectors_;
  std::uint64_t model_fingerprint_ = 0;
  std::size_t excluded_ = 0;
};

struct BuildReport {
  std::vector<std::int64_t> excluded_ids;  // entries with no in-vocabulary token
};

/// Embeds every canonical question from its stored tokens. Throws when no
/// entry is embeddable.
QuestionIndex build_index(const std::vector<CanonicalEntry>& entries, const Embedder& embedder,
                          std::uint64_t model_fingerprint, BuildReport* report = nullptr);

/// Exact scan. Results are ordered by similarity descending, then entry_id
/// ascending; fewer than k when the index is smaller. Throws on a zero or
/// wrong-sized query.
std::vector<Match> top_k(const QuestionIndex& index, std::span<const double> query, std::size_t k);

/// Binary layout is documented in docs/index_format.md.
std::string serialize_index(const QuestionIndex& index);
QuestionIndex parse_index(std::string_view bytes);

void save_index(const QuestionIndex& index, const std::filesystem::path& path);
/// With `expected_fingerprint`, an index built for another model is
/// rejected with ErrorKind::kModel.
QuestionIndex load_index(const std::filesystem::path& path,
                         std::optional<std::uint64_t> expected_fingerprint = std::nullopt);

}  // namespace agriqa
