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

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "evsum/embeddings.hpp"
#include "evsum/tokenizer.hpp"

namespace evsum {

inline constexpr std::size_t kDefaultWindow = 6;
inline constexpr double kDefaultUnderlinePct = 70.0;
inline constexpr double kDefaultHighlightPct = 65.0;
inline constexpr std::string_view kUnbiasedSentinel = "-1";

// Number of tokens in a full interior window. Must be >= 1.
struct WindowSpec {
  std::size_t size = kDefaultWindow;
};

// Inclusive token range.
struct WindowBounds {
  std::size_t lo = 0;
  std::size_t hi = 0;

  std::size_t length() const { return hi - lo + 1; }
  bool operator==(const WindowBounds&) const = default;
};

// Scaling window around token i: floor(W/2) tokens before, the token, and
// W - floor(W/2) - 1 after, clipped to the document.
WindowBounds window_bounds(std::size_t i, std::size_t n, WindowSpec window);

class BiasQuery {
 public:
  enum class Kind { kText, kUnbiased };

  static BiasQuery text(std::string query) {
    return BiasQuery(Kind::kText, std::move(query));
  }
  static BiasQuery unbiased() { return BiasQuery(Kind::kUnbiased, {}); }
  // "-1" (after trimming surrounding whitespace) selects the unbiased query.
  static BiasQuery parse(std::string_view input);

  Kind kind() const { return kind_; }
  bool is_unbiased() const { return kind_ == Kind::kUnbiased; }
  const std::string& query_text() const { return text_; }

 private:
  BiasQuery(Kind kind, std::string text) : kind_(kind), text_(std::move(text)) {}

  Kind kind_;
  std::string text_;
};

// Identifies the inputs a ScoreVector was computed from. The query is keyed
// by the pooled query vector, so queries that pool identically (including
// "-1" and the document text itself) share a fingerprint.
struct ScoreFingerprint {
  std::uint64_t document_hash = 0;
  std::uint64_t stack_id = 0;
  std::size_t window = 0;
  PoolingMode mode = PoolingMode::kMean;
  std::uint64_t query_hash = 0;

  bool operator==(const ScoreFingerprint&) const = default;
  std::string key() const;
};

struct ScoreVector {
  std::vector<double> scores;
  ScoreFingerprint fingerprint;

  std::size_t size() const { return scores.size(); }
};

struct SummarySelection {
  std::vector<bool> underlined;
  std::vector<bool> highlighted;
  double underline_pct = 0.0;
  double highlight_pct = 0.0;

  std::size_t underline_count() const;
  std::size_t highlight_count() const;
  bool operator==(const SummarySelection&) const = default;
};

std::uint64_t hash_bytes(std::string_view bytes);

ScoreFingerprint make_fingerprint(const TokenizedDocument& doc,
                                  const EmbeddingStack& stack,
                                  WindowSpec window, PoolingMode mode,
                                  std::span<const double> qvec);

// Throws kEmptyQuery / kEmptyDocument.
std::vector<double> query_vector(const BiasQuery& query,
                                 const TokenizedDocument& doc,
                                 const EmbeddingStack& stack,
                                 PoolingMode mode);

// a.b / (|a||b|), clamped to [-1, 1]; 0 when either norm is 0.
double cosine(std::span<const double> a, std::span<const double> b);

ScoreVector score_document(const TokenizedDocument& doc,
                           const EmbeddingStack& stack, WindowSpec window,
                           PoolingMode mode, std::span<const double> qvec);

ScoreVector score_document(const TokenizedDocument& doc,
                           const EmbeddingStack& stack, WindowSpec window,
                           PoolingMode mode, const BiasQuery& query);

// Token indices by (score descending, index ascending). Shared by select()
// and search() so both rank identically.
std::vector<std::size_t> rank_order(std::span<const double> scores);

// ceil(pct / 100 * n), clipped to n. Throws kPercentOutOfRange.
std::size_t selection_count(double pct, std::size_t n);

SummarySelection select(const ScoreVector& scores, double underline_pct,
                        double highlight_pct);

// Re-threshold cached scores; never touches embeddings.
inline SummarySelection resummarize(const ScoreVector& scores,
                                    double underline_pct,
                                    double highlight_pct) {
  return select(scores, underline_pct, highlight_pct);
}

}  // namespace evsum
