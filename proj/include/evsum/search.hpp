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
#include <vector>

#include "evsum/core.hpp"
#include "evsum/embeddings.hpp"
#include "evsum/tokenizer.hpp"

namespace evsum {

struct SearchHit {
  std::size_t token_index = 0;  // window center
  std::size_t byte_start = 0;   // first token of the window
  std::size_t byte_end = 0;     // end of the last token of the window
  double score = 0.0;
  std::size_t rank = 0;  // 1-based
};

struct SearchOptions {
  WindowSpec window;
  PoolingMode mode = PoolingMode::kMean;
  std::size_t top_k = 10;
  bool dedupe = true;
};

// Ranks already-computed scores. When dedupe is set, a candidate whose window
// span overlaps an accepted hit is skipped.
std::vector<SearchHit> rank_hits(const TokenizedDocument& doc,
                                 const ScoreVector& scores, WindowSpec window,
                                 std::size_t top_k, bool dedupe);

// Semantic find. Rejects the unbiased query with
// kUnbiasedQueryNotSearchable and top_k == 0 with kInvalidArgument.
std::vector<SearchHit> search(const TokenizedDocument& doc,
                              const EmbeddingStack& stack,
                              const BiasQuery& query,
                              const SearchOptions& options);

}  // namespace evsum
