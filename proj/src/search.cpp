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

#include "evsum/search.hpp"

#include "evsum/error.hpp"

namespace evsum {

namespace {

void check_k(std::size_t top_k) {
  if (top_k == 0) {
    throw Error(ErrorCode::kInvalidArgument, "top_k must be >= 1");
  }
}

}  // namespace

std::vector<SearchHit> rank_hits(const TokenizedDocument& doc,
                                 const ScoreVector& scores, WindowSpec window,
                                 std::size_t top_k, bool dedupe) {
  check_k(top_k);
  if (scores.size() != doc.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "score vector does not match the document");
  }
  std::vector<SearchHit> hits;
  const std::size_t n = doc.size();
  for (std::size_t i : rank_order(scores.scores)) {
    if (hits.size() == top_k) break;
    const WindowBounds b = window_bounds(i, n, window);
    SearchHit hit{i, doc.tokens[b.lo].byte_start, doc.tokens[b.hi].byte_end,
                  scores.scores[i], hits.size() + 1};
    if (dedupe) {
      bool overlaps = false;
      for (const SearchHit& h : hits) {
        if (hit.byte_start < h.byte_end && h.byte_start < hit.byte_end) {
          overlaps = true;
          break;
        }
      }
      if (overlaps) continue;
    }
    hits.push_back(hit);
  }
  return hits;
}

std::vector<SearchHit> search(const TokenizedDocument& doc,
                              const EmbeddingStack& stack,
                              const BiasQuery& query,
                              const SearchOptions& options) {
  if (query.is_unbiased()) {
    throw Error(ErrorCode::kUnbiasedQueryNotSearchable,
                "the unbiased query cannot be searched for");
  }
  check_k(options.top_k);
  const ScoreVector scores =
      score_document(doc, stack, options.window, options.mode, query);
  return rank_hits(doc, scores, options.window, options.top_k, options.dedupe);
}

}  // namespace evsum
