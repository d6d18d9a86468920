// Copyright 2026 The evsum Authors
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

#include "evsum/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "evsum/error.hpp"

namespace evsum {

namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

std::uint64_t hash_raw(const void* data, std::size_t n) {
  std::uint64_t h = kFnvOffset;
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= kFnvPrime;
  }
  return h;
}

void check_window(WindowSpec window) {
  if (window.size < 1) {
    throw Error(ErrorCode::kInvalidWindow, "window size must be >= 1");
  }
}

std::vector<double> pool_tokens(const std::vector<Token>& tokens,
                                const EmbeddingStack& stack, PoolingMode mode) {
  const std::size_t dim = stack.total_dimension();
  VectorPooler pooler(dim, mode);
  std::vector<float> scratch(dim);
  for (const Token& t : tokens) {
    stack.lookup_into(t.text, scratch);
    pooler.add(scratch);
  }
  std::vector<double> out(dim);
  pooler.finish(out);
  return out;
}

}  // namespace

std::uint64_t hash_bytes(std::string_view bytes) {
  return hash_raw(bytes.data(), bytes.size());
}

WindowBounds window_bounds(std::size_t i, std::size_t n, WindowSpec window) {
  check_window(window);
  if (i >= n) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "token index " + std::to_string(i) + " outside document of " +
                    std::to_string(n) + " tokens");
  }
  const std::size_t before = window.size / 2;
  const std::size_t after = window.size - before - 1;
  return {i >= before ? i - before : 0, std::min(n - 1, i + after)};
}

BiasQuery BiasQuery::parse(std::string_view input) {
  const auto first = input.find_first_not_of(" \t\r\n");
  const auto last = input.find_last_not_of(" \t\r\n");
  if (first != std::string_view::npos &&
      input.substr(first, last - first + 1) == kUnbiasedSentinel) {
    return unbiased();
  }
  return text(std::string(input));
}

std::string ScoreFingerprint::key() const {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%016llx-%016llx-w%zu-%s-%016llx",
                static_cast<unsigned long long>(document_hash),
                static_cast<unsigned long long>(stack_id), window,
                std::string(pooling_name(mode)).c_str(),
                static_cast<unsigned long long>(query_hash));
  return buf;
}

std::size_t SummarySelection::underline_count() const {
  return static_cast<std::size_t>(
      std::count(underlined.begin(), underlined.end(), true));
}

std::size_t SummarySelection::highlight_count() const {
  return static_cast<std::size_t>(
      std::count(highlighted.begin(), highlighted.end(), true));
}

ScoreFingerprint make_fingerprint(const TokenizedDocument& doc,
                                  const EmbeddingStack& stack,
                                  WindowSpec window, PoolingMode mode,
                                  std::span<const double> qvec) {
  return {hash_bytes(doc.source), stack.id(), window.size, mode,
          hash_raw(qvec.data(), qvec.size_bytes())};
}

std::vector<double> query_vector(const BiasQuery& query,
                                 const TokenizedDocument& doc,
                                 const EmbeddingStack& stack,
                                 PoolingMode mode) {
  if (query.is_unbiased()) {
    if (doc.empty()) {
      throw Error(ErrorCode::kEmptyDocument,
                  "unbiased query over an empty document");
    }
    return pool_tokens(doc.tokens, stack, mode);
  }
  const TokenizedDocument q = tokenize(query.query_text());
  if (q.empty()) {
    throw Error(ErrorCode::kEmptyQuery, "query has no tokens");
  }
  return pool_tokens(q.tokens, stack, mode);
}

double cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "cosine of vectors with lengths " + std::to_string(a.size()) +
                    " and " + std::to_string(b.size()));
  }
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    dot += a[k] * b[k];
    na += a[k] * a[k];
    nb += b[k] * b[k];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

ScoreVector score_document(const TokenizedDocument& doc,
                           const EmbeddingStack& stack, WindowSpec window,
                           PoolingMode mode, std::span<const double> qvec) {
  check_window(window);
  if (doc.empty()) {
    throw Error(ErrorCode::kEmptyDocument, "document has no tokens");
  }
  const std::size_t dim = stack.total_dimension();
  if (qvec.size() != dim) {
    throw Error(ErrorCode::kLengthMismatch,
                "query vector has " + std::to_string(qvec.size()) +
                    " components, stack has " + std::to_string(dim));
  }

  // Row-major n x dim matrix of token vectors, looked up once.
  const std::size_t n = doc.size();
  std::vector<float> rows(n * dim);
  for (std::size_t i = 0; i < n; ++i) {
    stack.lookup_into(doc.tokens[i].text,
                      std::span<float>(rows).subspan(i * dim, dim));
  }

  ScoreVector out;
  out.scores.resize(n);
  VectorPooler pooler(dim, mode);
  std::vector<double> pooled(dim);
  for (std::size_t i = 0; i < n; ++i) {
    const WindowBounds b = window_bounds(i, n, window);
    pooler.reset();
    for (std::size_t j = b.lo; j <= b.hi; ++j) {
      pooler.add(std::span<const float>(rows).subspan(j * dim, dim));
    }
    pooler.finish(pooled);
    out.scores[i] = cosine(qvec, pooled);
  }

  out.fingerprint = make_fingerprint(doc, stack, window, mode, qvec);
  return out;
}

ScoreVector score_document(const TokenizedDocument& doc,
                           const EmbeddingStack& stack, WindowSpec window,
                           PoolingMode mode, const BiasQuery& query) {
  if (doc.empty()) {
    throw Error(ErrorCode::kEmptyDocument, "document has no tokens");
  }
  const std::vector<double> qvec = query_vector(query, doc, stack, mode);
  return score_document(doc, stack, window, mode, qvec);
}

std::vector<std::size_t> rank_order(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  });
  return order;
}

std::size_t selection_count(double pct, std::size_t n) {
  if (!(pct >= 0.0 && pct <= 100.0)) {
    throw Error(ErrorCode::kPercentOutOfRange,
                "percentage must lie in [0, 100]");
  }
  if (n == 0 || pct == 0.0) return 0;
  const double x = pct * static_cast<double>(n) / 100.0;
  // Snap values a rounding error away from an integer (e.g. 33.3% style
  // inputs) before taking the ceiling.
  const double nearest = std::round(x);
  double k = std::abs(x - nearest) <= 1e-9 * std::max(1.0, x) ? nearest
                                                               : std::ceil(x);
  k = std::max(k, 1.0);
  return std::min(n, static_cast<std::size_t>(k));
}

SummarySelection select(const ScoreVector& scores, double underline_pct,
                        double highlight_pct) {
  const std::size_t n = scores.size();
  const std::size_t nu = selection_count(underline_pct, n);
  const std::size_t nh = selection_count(highlight_pct, n);

  SummarySelection sel;
  sel.underline_pct = underline_pct;
  sel.highlight_pct = highlight_pct;
  sel.underlined.assign(n, false);
  sel.highlighted.assign(n, false);
  const std::vector<std::size_t> order = rank_order(scores.scores);
  for (std::size_t r = 0; r < nu; ++r) sel.underlined[order[r]] = true;
  for (std::size_t r = 0; r < nh; ++r) sel.highlighted[order[r]] = true;
  return sel;
}

}  // namespace evsum
