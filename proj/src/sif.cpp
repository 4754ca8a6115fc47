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

#include "sif.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"
#include "fileio.hpp"

namespace agriqa {

namespace {

constexpr double kPowerTolerance = 1e-9;
constexpr int kPowerMaxIterations = 200000;

}  // namespace

double l2_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double SifModel::weight(const std::string& token, double prob) const {
  const double k = crop_tokens.contains(token) ? boost : 1.0;
  return k * a / (a + prob);
}

std::set<std::string> crop_tokens(const std::vector<std::string>& crops, const Normalizer& normalizer) {
  std::set<std::string> out;
  for (const auto& c : crops) {
    for (auto& w : normalizer.normalize_words(c)) out.insert(std::move(w));
  }
  return out;
}

SifResult sif_embed(std::span<const std::string> tokens, const WordVectorTable& table,
                    const SifModel& model, bool apply_pc) {
  SifResult r;
  r.vector.assign(static_cast<std::size_t>(table.dim), 0.0);
  double total = 0.0;
  // Summation runs in sorted token order so any permutation of the input
  // gives a bit-identical result.
  std::vector<std::string_view> ordered(tokens.begin(), tokens.end());
  std::sort(ordered.begin(), ordered.end());
  for (const auto t_view : ordered) {
    const std::string t(t_view);
    const auto id = table.id(t);
    if (!id) continue;
    const double w = model.weight(t, table.unigram_prob[static_cast<std::size_t>(*id)]);
    const auto v = table.vector(*id);
    for (std::size_t d = 0; d < r.vector.size(); ++d) r.vector[d] += w * v[d];
    total += w;
    r.embeddable = true;
  }
  if (!r.embeddable) return r;
  for (auto& x : r.vector) x /= total;

  if (apply_pc && !model.pc.empty()) {
    double proj = 0.0;
    for (std::size_t d = 0; d < r.vector.size(); ++d) proj += r.vector[d] * model.pc[d];
    for (std::size_t d = 0; d < r.vector.size(); ++d) r.vector[d] -= proj * model.pc[d];
  }
  return r;
}

std::vector<double> fit_principal_component(const std::vector<std::vector<double>>& rows) {
  if (rows.size() < 2) fail(ErrorKind::kInvalidArgument, "principal component needs at least 2 rows");
  const std::size_t D = rows.front().size();
  if (D == 0) fail(ErrorKind::kInvalidArgument, "principal component of zero-width rows");

  // Gram matrix C = M^T M.
  std::vector<double> gram(D * D, 0.0);
  const std::vector<double>* longest = &rows.front();
  double longest_norm = -1.0;
  for (const auto& row : rows) {
    if (row.size() != D) fail(ErrorKind::kInvalidArgument, "ragged rows");
    for (std::size_t i = 0; i < D; ++i) {
      if (row[i] == 0.0) continue;
      for (std::size_t j = 0; j < D; ++j) gram[i * D + j] += row[i] * row[j];
    }
    const double n = l2_norm(row);
    if (n > longest_norm) {
      longest_norm = n;
      longest = &row;
    }
  }
  if (longest_norm <= 0.0) fail(ErrorKind::kInvalidArgument, "principal component of an all-zero matrix");

  // Start from the longest row; it always has a component along the top
  // singular direction unless that row is orthogonal to it.
  std::vector<double> x(longest->begin(), longest->end());
  for (auto& v : x) v /= longest_norm;
  std::vector<double> y(D);
  for (int it = 0; it < kPowerMaxIterations; ++it) {
    for (std::size_t i = 0; i < D; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < D; ++j) s += gram[i * D + j] * x[j];
      y[i] = s;
    }
    const double n = l2_norm(y);
    if (n == 0.0) fail(ErrorKind::kModel, "power iteration collapsed to zero");
    double delta = 0.0;
    for (std::size_t i = 0; i < D; ++i) {
      y[i] /= n;
      delta += (y[i] - x[i]) * (y[i] - x[i]);
    }
    x.swap(y);
    if (std::sqrt(delta) < kPowerTolerance) break;
  }

  std::size_t arg = 0;
  for (std::size_t i = 1; i < D; ++i) {
    if (std::abs(x[i]) > std::abs(x[arg])) arg = i;
  }
  if (x[arg] < 0) {
    for (auto& v : x) v = -v;
  }
  const double n = l2_norm(x);
  for (auto& v : x) v /= n;
  return x;
}

SifModel fit_sif_model(const WordVectorTable& table, const Sentences& training_sentences, double a,
                       double boost, std::set<std::string> crops) {
  if (!(a > 0)) fail(ErrorKind::kInvalidArgument, "SIF parameter a must be positive");
  if (!(boost >= 1)) fail(ErrorKind::kInvalidArgument, "entity boost must be >= 1");
  SifModel model;
  model.a = a;
  model.boost = boost;
  model.crop_tokens = std::move(crops);

  std::vector<std::vector<double>> rows;
  for (const auto& s : training_sentences) {
    auto r = sif_embed(s, table, model, /*apply_pc=*/false);
    if (r.embeddable) rows.push_back(std::move(r.vector));
  }
  model.pc = fit_principal_component(rows);
  return model;
}

std::uint64_t model_fingerprint(const WordVectorTable& table, const SifModel& model) {
  Fnv1a h;
  h.update("agriqa-model-v1");
  h.update_u64(static_cast<std::uint64_t>(table.dim));
  h.update_u64(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    h.update(table.words[i]);
    h.update_u64(static_cast<std::uint64_t>(table.counts[i]));
  }
  for (double x : table.input_vectors) h.update_f64(x);
  h.update_f64(model.a);
  h.update_f64(model.boost);
  h.update_u64(model.pc.size());
  for (double x : model.pc) h.update_f64(x);
  for (const auto& c : model.crop_tokens) {
    h.update(c);
    h.update("\n");
  }
  return h.digest();
}

SifResult Embedder::embed_tokens(std::span<const std::string> tokens) const {
  SifResult r = sif_embed(tokens, *table_, *model_, /*apply_pc=*/true);
  if (!r.embeddable) return r;
  const double n = l2_norm(r.vector);
  if (n == 0.0) {
    r.embeddable = false;
    return r;
  }
  for (auto& x : r.vector) x /= n;
  return r;
}

SifResult Embedder::embed_question(std::string_view raw_text) const {
  const auto words = normalizer_->normalize_words(raw_text);
  return embed_tokens(words);
}

}  // namespace agriqa
