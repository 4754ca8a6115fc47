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

#include "index.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>

#include "error.hpp"
#include "fileio.hpp"

namespace agriqa {

namespace {

constexpr std::string_view kMagic = "AGRIQAIX";
constexpr std::uint32_t kVersion = 1;
constexpr std::size_t kBlockRows = 256;

template <typename T>
void put_le(std::string& out, T value) {
  using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
  const U bits = std::bit_cast<U>(value);
  for (std::size_t i = 0; i < sizeof(U); ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  template <typename T>
  T get() {
    using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
    need(sizeof(U));
    U bits = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) {
      bits |= static_cast<U>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    }
    pos_ += sizeof(U);
    return std::bit_cast<T>(bits);
  }

  std::string_view take(std::size_t n) {
    need(n);
    auto s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  bool done() const { return pos_ == bytes_.size(); }

 private:
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) fail(ErrorKind::kParse, "index file truncated");
  }

  std::string_view bytes_;
  std::size_t pos_ = 0;
};

struct Ranked {
  double similarity;
  std::int64_t entry_id;
  std::size_t row;
};

// Strict weak order: better first.
bool better(const Ranked& x, const Ranked& y) {
  if (x.similarity != y.similarity) return x.similarity > y.similarity;
  return x.entry_id < y.entry_id;
}

double clamp_unit(double x) { return std::clamp(x, -1.0, 1.0); }

}  // namespace

double cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) fail(ErrorKind::kInvalidArgument, "cosine of vectors with different sizes");
  double uv = 0.0, uu = 0.0, vv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    uv += u[i] * v[i];
    uu += u[i] * u[i];
    vv += v[i] * v[i];
  }
  if (uu == 0.0 || vv == 0.0) fail(ErrorKind::kInvalidArgument, "cosine of a zero vector");
  return clamp_unit(uv / (std::sqrt(uu) * std::sqrt(vv)));
}

QuestionIndex::QuestionIndex(int dim, std::vector<CanonicalEntry> entries, std::vector<float> vectors,
                             std::uint64_t model_fingerprint, std::size_t excluded)
    : dim_(dim),
      entries_(std::move(entries)),
      vectors_(std::move(vectors)),
      model_fingerprint_(model_fingerprint),
      excluded_(excluded) {
  if (dim_ <= 0 || vectors_.size() != entries_.size() * static_cast<std::size_t>(dim_)) {
    fail(ErrorKind::kInvalidArgument, "index rows do not match entries");
  }
}

std::span<const float> QuestionIndex::row(std::size_t i) const {
  const auto d = static_cast<std::size_t>(dim_);
  return {vectors_.data() + i * d, d};
}

std::uint64_t QuestionIndex::content_fingerprint() const {
  Fnv1a h;
  h.update_u64(model_fingerprint_);
  h.update_u64(static_cast<std::uint64_t>(dim_));
  for (float x : vectors_) h.update_u64(std::bit_cast<std::uint32_t>(x));
  h.update(serialize_entries(entries_));
  return h.digest();
}

QuestionIndex build_index(const std::vector<CanonicalEntry>& entries, const Embedder& embedder,
                          std::uint64_t model_fingerprint, BuildReport* report) {
  std::vector<CanonicalEntry> kept;
  std::vector<float> rows;
  BuildReport local;
  for (const auto& e : entries) {
    const auto tokens = e.tokens();
    const auto r = embedder.embed_tokens(tokens);
    if (!r.embeddable) {
      local.excluded_ids.push_back(e.entry_id);
      continue;
    }
    for (double x : r.vector) rows.push_back(static_cast<float>(x));
    kept.push_back(e);
  }
  if (kept.empty()) fail(ErrorKind::kModel, "no embeddable entries to index");
  const std::size_t excluded = local.excluded_ids.size();
  if (report) *report = std::move(local);
  return QuestionIndex(embedder.dim(), std::move(kept), std::move(rows), model_fingerprint, excluded);
}

std::vector<Match> top_k(const QuestionIndex& index, std::span<const double> query, std::size_t k) {
  if (k == 0) fail(ErrorKind::kInvalidArgument, "k must be at least 1");
  if (query.size() != static_cast<std::size_t>(index.dim())) {
    fail(ErrorKind::kInvalidArgument, "query dimension does not match the index");
  }
  double qn = 0.0;
  for (double x : query) qn += x * x;
  if (qn == 0.0) fail(ErrorKind::kInvalidArgument, "zero query vector");

  const std::size_t n = index.size();
  const std::size_t keep = std::min(k, n);
  const auto D = static_cast<std::size_t>(index.dim());

  // Min-heap on `better`: heap.front() is the worst of the current top k.
  std::vector<Ranked> heap;
  heap.reserve(keep + 1);
  std::array<double, kBlockRows> sims{};
  for (std::size_t start = 0; start < n; start += kBlockRows) {
    const std::size_t end = std::min(n, start + kBlockRows);
    for (std::size_t r = start; r < end; ++r) {
      const auto row = index.row(r);
      double s = 0.0;
      for (std::size_t d = 0; d < D; ++d) s += static_cast<double>(row[d]) * query[d];
      sims[r - start] = clamp_unit(s);
    }
    for (std::size_t r = start; r < end; ++r) {
      Ranked cand{sims[r - start], index.entry(r).entry_id, r};
      if (heap.size() < keep) {
        heap.push_back(cand);
        std::push_heap(heap.begin(), heap.end(), better);
      } else if (better(cand, heap.front())) {
        std::pop_heap(heap.begin(), heap.end(), better);
        heap.back() = cand;
        std::push_heap(heap.begin(), heap.end(), better);
      }
    }
  }
  std::sort(heap.begin(), heap.end(), better);

  std::vector<Match> out;
  out.reserve(heap.size());
  for (const auto& r : heap) {
    out.push_back(Match{r.entry_id, r.similarity, index.entry(r.row).canonical_question, r.row});
  }
  return out;
}

std::string serialize_index(const QuestionIndex& index) {
  std::string out(kMagic);
  put_le<std::uint32_t>(out, kVersion);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(index.dim()));
  put_le<std::uint64_t>(out, index.size());
  put_le<std::uint64_t>(out, index.model_fingerprint());
  put_le<std::uint64_t>(out, index.excluded());
  for (std::size_t r = 0; r < index.size(); ++r) {
    for (float x : index.row(r)) put_le<float>(out, x);
  }
  const std::string table = serialize_entries(index.entries());
  put_le<std::uint64_t>(out, table.size());
  out += table;
  return out;
}

QuestionIndex parse_index(std::string_view bytes) {
  Reader in(bytes);
  if (in.take(kMagic.size()) != kMagic) fail(ErrorKind::kParse, "not an index file (bad magic)");
  const auto version = in.get<std::uint32_t>();
  if (version != kVersion) fail(ErrorKind::kParse, "unsupported index version " + std::to_string(version));
  const auto dim = in.get<std::uint32_t>();
  const auto count = in.get<std::uint64_t>();
  const auto fingerprint = in.get<std::uint64_t>();
  const auto excluded = in.get<std::uint64_t>();
  if (dim == 0 || count > bytes.size() / (4ULL * dim)) fail(ErrorKind::kParse, "index header is inconsistent");
  std::vector<float> rows(count * dim);
  for (auto& x : rows) x = in.get<float>();
  const auto table_size = in.get<std::uint64_t>();
  auto entries = parse_entries(in.take(table_size));
  if (!in.done()) fail(ErrorKind::kParse, "trailing bytes after index entry table");
  if (entries.size() != count) fail(ErrorKind::kParse, "index entry table does not match row count");
  return QuestionIndex(static_cast<int>(dim), std::move(entries), std::move(rows), fingerprint, excluded);
}

void save_index(const QuestionIndex& index, const std::filesystem::path& path) {
  write_file(path, serialize_index(index));
}

QuestionIndex load_index(const std::filesystem::path& path, std::optional<std::uint64_t> expected_fingerprint) {
  auto index = parse_index(read_file(path));
  if (expected_fingerprint && *expected_fingerprint != index.model_fingerprint()) {
    fail(ErrorKind::kModel, "index " + path.string() + " was built for model " + hex64(index.model_fingerprint()) +
                                ", not " + hex64(*expected_fingerprint));
  }
  return index;
}

}  // namespace agriqa
