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
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "evsum/core.hpp"
#include "evsum/embeddings.hpp"
#include "evsum/tokenizer.hpp"

namespace evsum {

struct CardSettings {
  std::size_t window = kDefaultWindow;
  PoolingMode mode = PoolingMode::kMean;
  double underline_pct = kDefaultUnderlinePct;
  double highlight_pct = kDefaultHighlightPct;
  std::vector<std::string> embeddings;
};

// Everything a renderer needs. `scores` may be empty when a renderer that
// ignores scores is used; render_spans() requires one score per token.
struct CardDocument {
  std::string tag;
  std::optional<std::string> cite;
  std::shared_ptr<const TokenizedDocument> document;
  SummarySelection selection;
  std::vector<double> scores;
  CardSettings settings;

  const std::string& body() const { return document->source; }
};

enum class Tier { kUnderline, kHighlight };

std::string_view tier_name(Tier tier);

// Tier a token renders with; highlight wins over underline.
enum class Emphasis { kNone, kUnderline, kHighlight };
Emphasis emphasis_of(const SummarySelection& sel, std::size_t token);

struct TerminalStyle {
  int underline_on = 4;
  int underline_off = 24;
  int highlight_on = 43;  // yellow background
  int highlight_off = 49;
};

// SGR-styled text. A trailing reset (SGR 0) is emitted only when some token
// was styled, so an empty selection returns the body unchanged.
std::string render_terminal(const CardDocument& card,
                            const TerminalStyle& style = {});

struct HtmlStyle {
  std::string highlight_color = "yellow";
};

// Standalone HTML5 document. The body text sits in
// <div class="card-body"> with white-space preserved.
std::string render_html(const CardDocument& card, const HtmlStyle& style = {});

std::string html_escape(std::string_view text);

struct SpanRecord {
  Tier tier = Tier::kUnderline;
  std::size_t byte_start = 0;
  std::size_t byte_end = 0;
  std::size_t token_index = 0;
  double score = 0.0;
};

struct SpanReport {
  std::vector<SpanRecord> spans;
  CardSettings settings;
};

// One record per selected token per tier, ordered by byte_start with the
// underline record first when a token carries both.
SpanReport make_span_report(const CardDocument& card);
nlohmann::json to_json(const SpanReport& report);
nlohmann::json to_json(const CardSettings& settings);
std::string render_spans(const CardDocument& card);

// Tag, blank line, optional cite and blank line, then the body with
// `_underline_` and `*highlight*` markers. Marker characters already in the
// body are not escaped.
std::string render_card_text(const CardDocument& card);

}  // namespace evsum
