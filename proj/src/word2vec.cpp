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

#include "word2vec.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <random>

#include "error.hpp"
#include "fileio.hpp"
#include "rng.hpp"

namespace agriqa {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// -log s(x), stable for large |x|.
double neg_log_sigmoid(double x) {
  return x > 0 ? std::log1p(std::exp(-x)) : -x + std::log1p(std::exp(x));
}

// Gradient kernel shared by the public API and the trainer. Writes
// dL/dc into grad_center and returns the loss; the context and negative
// gradients are scalar multiples of c, returned through the coefficients.
double sgns_kernel(std::span<const double> center, std::span<const double> context,
                   const std::vector<std::span<const double>>& negatives,
                   std::span<double> grad_center, double& context_coef,
                   std::vector<double>& negative_coefs) {
  std::fill(grad_center.begin(), grad_center.end(), 0.0);
  const double pos = dot(context, center);
  double loss = neg_log_sigmoid(pos);
  context_coef = sigmoid(pos) - 1.0;
  for (std::size_t d = 0; d < grad_center.size(); ++d) grad_center[d] += context_coef * context[d];

  negative_coefs.resize(negatives.size());
  for (std::size_t k = 0; k < negatives.size(); ++k) {
    const double x = dot(negatives[k], center);
    loss += neg_log_sigmoid(-x);
    negative_coefs[k] = sigmoid(x);
    for (std::size_t d = 0; d < grad_center.size(); ++d) grad_center[d] += negative_coefs[k] * negatives[k][d];
  }
  return loss;
}

}  // namespace

std::optional<int> WordVectorTable::id(const std::string& word) const {
  auto it = vocab.find(word);
  if (it == vocab.end()) return std::nullopt;
  return it->second;
}

std::span<const double> WordVectorTable::vector(int id) const {
  return {input_vectors.data() + static_cast<std::size_t>(id) * static_cast<std::size_t>(dim),
          static_cast<std::size_t>(dim)};
}

std::span<double> WordVectorTable::vector(int id) {
  return {input_vectors.data() + static_cast<std::size_t>(id) * static_cast<std::size_t>(dim),
          static_cast<std::size_t>(dim)};
}

void WordVectorTable::reindex() {
  vocab.clear();
  std::int64_t total = 0;
  for (std::size_t i = 0; i < words.size(); ++i) {
    vocab.emplace(words[i], static_cast<int>(i));
    total += counts[i];
  }
  unigram_prob.assign(words.size(), 0.0);
  for (std::size_t i = 0; i < words.size(); ++i) {
    unigram_prob[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
  }
}

SgnsGradient sgns_gradient(std::span<const double> center, std::span<const double> context,
                           const std::vector<std::span<const double>>& negatives) {
  SgnsGradient g;
  g.center.assign(center.size(), 0.0);
  double context_coef = 0.0;
  std::vector<double> negative_coefs;
  g.loss = sgns_kernel(center, context, negatives, g.center, context_coef, negative_coefs);
  g.context.resize(center.size());
  for (std::size_t d = 0; d < center.size(); ++d) g.context[d] = context_coef * center[d];
  for (double coef : negative_coefs) {
    std::vector<double> gn(center.size());
    for (std::size_t d = 0; d < center.size(); ++d) gn[d] = coef * center[d];
    g.negatives.push_back(std::move(gn));
  }
  return g;
}

double sgns_loss(std::span<const double> center, std::span<const double> context,
                 const std::vector<std::span<const double>>& negatives) {
  double loss = neg_log_sigmoid(dot(context, center));
  for (const auto& n : negatives) loss += neg_log_sigmoid(-dot(n, center));
  return loss;
}

std::map<std::string, double> compute_unigram_probs(const Sentences& sentences) {
  std::map<std::string, std::int64_t> counts;
  std::int64_t total = 0;
  for (const auto& s : sentences) {
    for (const auto& w : s) {
      ++counts[w];
      ++total;
    }
  }
  if (total == 0) fail(ErrorKind::kInvalidArgument, "empty corpus");
  std::map<std::string, double> probs;
  for (const auto& [w, c] : counts) probs[w] = static_cast<double>(c) / static_cast<double>(total);
  return probs;
}

WordVectorTable train_word2vec(const Sentences& sentences, const TrainConfig& cfg, TrainStats* stats) {
  if (cfg.dim <= 0) fail(ErrorKind::kInvalidArgument, "dim must be positive");
  if (cfg.window <= 0 || cfg.negatives <= 0 || cfg.epochs <= 0 || cfg.min_count <= 0 ||
      !(cfg.learning_rate > 0)) {
    fail(ErrorKind::kInvalidArgument, "window, negatives, epochs, min_count and learning rate must be positive");
  }
  if (sentences.empty()) fail(ErrorKind::kInvalidArgument, "empty corpus");

  std::map<std::string, std::int64_t> raw_counts;
  for (const auto& s : sentences) {
    if (s.empty()) fail(ErrorKind::kInvalidArgument, "empty sentence in corpus");
    for (const auto& w : s) ++raw_counts[w];
  }

  WordVectorTable table;
  table.dim = cfg.dim;
  std::vector<std::pair<std::string, std::int64_t>> kept;
  for (const auto& [w, c] : raw_counts) {
    if (c >= cfg.min_count) kept.emplace_back(w, c);
  }
  if (kept.empty()) fail(ErrorKind::kInvalidArgument, "no word reaches min_count");
  std::stable_sort(kept.begin(), kept.end(),
                   [](const auto& x, const auto& y) { return x.second > y.second; });
  for (auto& [w, c] : kept) {
    table.words.push_back(w);
    table.counts.push_back(c);
  }
  table.reindex();

  const std::size_t V = table.size();
  const std::size_t D = static_cast<std::size_t>(cfg.dim);
  std::mt19937_64 rng(cfg.seed);
  table.input_vectors.resize(V * D);
  for (auto& x : table.input_vectors) x = (uniform01(rng) - 0.5) / static_cast<double>(D);
  table.output_vectors.assign(V * D, 0.0);

  // Negative-sampling distribution: unigram^(3/4), sampled by inverse CDF.
  std::vector<double> cdf(V);
  double acc = 0.0;
  for (std::size_t i = 0; i < V; ++i) {
    acc += std::pow(static_cast<double>(table.counts[i]), 0.75);
    cdf[i] = acc;
  }
  auto draw_negative = [&]() -> int {
    const double u = uniform01(rng) * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) --it;
    return static_cast<int>(it - cdf.begin());
  };

  std::vector<std::vector<int>> encoded;
  std::int64_t total_tokens = 0;
  for (const auto& s : sentences) {
    std::vector<int> ids;
    for (const auto& w : s) {
      if (auto id = table.id(w)) ids.push_back(*id);
    }
    total_tokens += static_cast<std::int64_t>(ids.size());
    encoded.push_back(std::move(ids));
  }

  auto out_row = [&](int id) {
    return std::span<double>(table.output_vectors.data() + static_cast<std::size_t>(id) * D, D);
  };

  const double total_steps = static_cast<double>(total_tokens) * cfg.epochs + 1.0;
  std::int64_t processed = 0;
  std::vector<double> grad_center(D);
  std::vector<double> negative_coefs;
  std::vector<int> negative_ids;
  std::vector<std::span<const double>> negative_rows;
  std::vector<double> center_copy(D);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    double loss_sum = 0.0;
    std::int64_t loss_n = 0;
    for (const auto& ids : encoded) {
      const auto n = static_cast<std::ptrdiff_t>(ids.size());
      for (std::ptrdiff_t i = 0; i < n; ++i) {
        const double lr = cfg.learning_rate *
                          std::max(1e-4, 1.0 - static_cast<double>(processed) / total_steps);
        const auto span = static_cast<std::ptrdiff_t>(cfg.window) -
                          static_cast<std::ptrdiff_t>(uniform_below(rng, static_cast<std::uint64_t>(cfg.window)));
        for (std::ptrdiff_t j = std::max<std::ptrdiff_t>(0, i - span);
             j <= std::min<std::ptrdiff_t>(n - 1, i + span); ++j) {
          if (j == i) continue;
          const int center = ids[static_cast<std::size_t>(i)];
          const int context = ids[static_cast<std::size_t>(j)];
          negative_ids.clear();
          for (int k = 0; k < cfg.negatives; ++k) {
            const int neg = draw_negative();
            if (neg != context) negative_ids.push_back(neg);
          }
          negative_rows.clear();
          for (int id : negative_ids) negative_rows.emplace_back(out_row(id));

          auto c = table.vector(center);
          std::copy(c.begin(), c.end(), center_copy.begin());
          double context_coef = 0.0;
          loss_sum += sgns_kernel(center_copy, out_row(context), negative_rows, grad_center,
                                  context_coef, negative_coefs);
          ++loss_n;

          auto o = out_row(context);
          for (std::size_t d = 0; d < D; ++d) o[d] -= lr * context_coef * center_copy[d];
          for (std::size_t k = 0; k < negative_ids.size(); ++k) {
            auto r = out_row(negative_ids[k]);
            for (std::size_t d = 0; d < D; ++d) r[d] -= lr * negative_coefs[k] * center_copy[d];
          }
          for (std::size_t d = 0; d < D; ++d) c[d] -= lr * grad_center[d];
        }
        ++processed;
      }
    }
    if (stats) {
      stats->epoch_mean_loss.push_back(loss_n ? loss_sum / static_cast<double>(loss_n) : 0.0);
      stats->pairs += loss_n;
    }
  }

  for (double x : table.input_vectors) {
    if (!std::isfinite(x)) fail(ErrorKind::kModel, "training diverged: non-finite vector component");
  }
  return table;
}

std::string serialize_vectors(const WordVectorTable& table) {
  std::string out = std::to_string(table.size()) + " " + std::to_string(table.dim) + "\n";
  char buf[40];
  for (std::size_t i = 0; i < table.size(); ++i) {
    out += table.words[i];
    for (double x : table.vector(static_cast<int>(i))) {
      std::snprintf(buf, sizeof(buf), " %.17g", x);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

std::string serialize_counts(const WordVectorTable& table) {
  std::string out;
  for (std::size_t i = 0; i < table.size(); ++i) {
    out += table.words[i] + "\t" + std::to_string(table.counts[i]) + "\n";
  }
  return out;
}

WordVectorTable parse_vectors(std::string_view vectors_text, std::string_view counts_text) {
  auto lines = split(vectors_text, '\n');
  if (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) fail(ErrorKind::kParse, "vector file is empty");

  const auto header = split(trim(lines[0]), ' ');
  std::size_t V = 0;
  int D = 0;
  if (header.size() != 2 ||
      std::from_chars(header[0].data(), header[0].data() + header[0].size(), V).ec != std::errc() ||
      std::from_chars(header[1].data(), header[1].data() + header[1].size(), D).ec != std::errc() ||
      D <= 0) {
    fail(ErrorKind::kParse, "vector file header must be 'vocab_size dim'");
  }
  if (lines.size() != V + 1) fail(ErrorKind::kParse, "vector file row count does not match header");

  WordVectorTable table;
  table.dim = D;
  table.input_vectors.reserve(V * static_cast<std::size_t>(D));
  for (std::size_t i = 1; i <= V; ++i) {
    const auto parts = split(trim(lines[i]), ' ');
    if (parts.size() != static_cast<std::size_t>(D) + 1) {
      fail(ErrorKind::kParse, "vector file line " + std::to_string(i + 1) + ": expected word and " +
                                  std::to_string(D) + " values");
    }
    table.words.push_back(parts[0]);
    for (std::size_t d = 1; d < parts.size(); ++d) {
      double x = 0;
      const auto& p = parts[d];
      auto [ptr, ec] = std::from_chars(p.data(), p.data() + p.size(), x);
      if (ec != std::errc() || ptr != p.data() + p.size() || !std::isfinite(x)) {
        fail(ErrorKind::kParse, "vector file line " + std::to_string(i + 1) + ": bad number '" + p + "'");
      }
      table.input_vectors.push_back(x);
    }
  }

  std::unordered_map<std::string, std::int64_t> counts;
  for (const auto& line : split(counts_text, '\n')) {
    if (trim(line).empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) fail(ErrorKind::kParse, "counts file: expected word<TAB>count");
    std::int64_t c = 0;
    const std::string_view num = trim(std::string_view(line).substr(tab + 1));
    if (std::from_chars(num.data(), num.data() + num.size(), c).ec != std::errc() || c < 1) {
      fail(ErrorKind::kParse, "counts file: bad count in '" + line + "'");
    }
    counts[line.substr(0, tab)] = c;
  }
  for (const auto& w : table.words) {
    auto it = counts.find(w);
    if (it == counts.end()) fail(ErrorKind::kParse, "counts file has no entry for '" + w + "'");
    table.counts.push_back(it->second);
  }
  table.reindex();
  if (table.vocab.size() != table.words.size()) fail(ErrorKind::kParse, "vector file repeats a word");
  return table;
}

}  // namespace agriqa
