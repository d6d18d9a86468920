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
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "evsum/core.hpp"
#include "evsum/embeddings.hpp"
#include "evsum/render.hpp"

namespace evsum::cli {

inline constexpr const char* kEmbeddingsDirEnv = "EVSUM_EMBEDDINGS_DIR";

enum class OutputFormat { kAnsi, kHtml, kCard, kSpans };

OutputFormat parse_format(std::string_view name);

struct CliConfig {
  std::vector<std::filesystem::path> embeddings;
  std::size_t window = kDefaultWindow;
  PoolingMode pooling = PoolingMode::kMean;
  double underline_pct = kDefaultUnderlinePct;
  double highlight_pct = kDefaultHighlightPct;
  OutputFormat format = OutputFormat::kAnsi;
  std::optional<std::string> query;
  std::optional<std::filesystem::path> input;  // "-" reads standard input
  bool search = false;
  std::size_t top_k = 10;
  bool dedupe = true;
  std::optional<std::string> tag;
  std::optional<std::string> cite;
  TerminalStyle terminal;
  HtmlStyle html;
};

// Explicit paths first; relative paths that do not exist are retried under
// $EVSUM_EMBEDDINGS_DIR. With no paths, every *.txt / *.vec file in that
// directory is used, sorted by name.
std::vector<std::filesystem::path> resolve_embedding_paths(
    const std::vector<std::filesystem::path>& explicit_paths);

// The single pipeline used by both the batch and interactive paths.
ScoreVector score(const TokenizedDocument& doc, const EmbeddingStack& stack,
                  const CliConfig& config, const BiasQuery& query);
std::string render_summary(std::shared_ptr<const TokenizedDocument> doc,
                           const ScoreVector& scores,
                           const EmbeddingStack& stack,
                           const CliConfig& config, const BiasQuery& query);
std::string render_search(const TokenizedDocument& doc,
                          const EmbeddingStack& stack, const CliConfig& config,
                          const BiasQuery& query);

// Exit codes: 0 success, 1 I/O or usage failure, 2 embedding load failure
// (returned by run()).
int run_batch(const CliConfig& config, const EmbeddingStack& stack,
              std::istream& in, std::ostream& out, std::ostream& err);
int run_interactive(const CliConfig& config, const EmbeddingStack& stack,
                    std::istream& in, std::ostream& out, std::ostream& err);

// Parses flags, loads embeddings and dispatches to batch, interactive or
// service mode.
int run(int argc, const char* const* argv, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace evsum::cli
