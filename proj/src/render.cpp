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

#include "evsum/render.hpp"

#include <algorithm>

#include "evsum/error.hpp"

namespace evsum {

namespace {

std::string sgr(int code) { return "\x1b[" + std::to_string(code) + "m"; }

// Calls emit_gap(text) for inter-token text and emit_token(index, text) for
// each token, in document order.
template <typename Gap, typename Tok>
void walk(const TokenizedDocument& doc, Gap&& emit_gap, Tok&& emit_token) {
  const std::string_view src = doc.source;
  std::size_t pos = 0;
  for (const Token& t : doc.tokens) {
    emit_gap(src.substr(pos, t.byte_start - pos));
    emit_token(t.index, src.substr(t.byte_start, t.byte_end - t.byte_start));
    pos = t.byte_end;
  }
  emit_gap(src.substr(pos));
}

void check_card(const CardDocument& card) {
  if (!card.document) {
    throw Error(ErrorCode::kInvalidArgument, "card has no document");
  }
  const std::size_t n = card.document->size();
  if (card.selection.underlined.size() != n ||
      card.selection.highlighted.size() != n) {
    throw Error(ErrorCode::kLengthMismatch,
                "selection masks do not match the token count");
  }
}

}  // namespace

std::string_view tier_name(Tier tier) {
  return tier == Tier::kHighlight ? "highlight" : "underline";
}

Emphasis emphasis_of(const SummarySelection& sel, std::size_t token) {
  if (sel.highlighted[token]) return Emphasis::kHighlight;
  if (sel.underlined[token]) return Emphasis::kUnderline;
  return Emphasis::kNone;
}

std::string render_terminal(const CardDocument& card,
                            const TerminalStyle& style) {
  check_card(card);
  const std::string u_on = sgr(style.underline_on);
  const std::string u_off = sgr(style.underline_off);
  const std::string h_on = sgr(style.highlight_on);
  const std::string h_off = sgr(style.highlight_off);

  std::string out;
  out.reserve(card.body().size() * 2);
  bool styled = false;
  walk(
      *card.document, [&](std::string_view gap) { out.append(gap); },
      [&](std::size_t i, std::string_view text) {
        switch (emphasis_of(card.selection, i)) {
          case Emphasis::kHighlight:
            out.append(h_on).append(text).append(h_off);
            styled = true;
            break;
          case Emphasis::kUnderline:
            out.append(u_on).append(text).append(u_off);
            styled = true;
            break;
          case Emphasis::kNone:
            out.append(text);
            break;
        }
      });
  if (styled) out.append(sgr(0));
  return out;
}

std::string html_escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      case '\'':
        out += "&#39;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

std::string render_html(const CardDocument& card, const HtmlStyle& style) {
  check_card(card);
  std::string out;
  out.reserve(card.body().size() * 2 + 512);
  out += "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n<title>";
  out += html_escape(card.tag);
  out += "</title>\n<style>\n"
         ".card-tag { font-weight: bold; }\n"
         ".card-body { white-space: pre-wrap; }\n"
         ".card-body mark { background-color: ";
  out += html_escape(style.highlight_color);
  out += "; }\n</style>\n</head>\n<body>\n<h1 class=\"card-tag\">";
  out += html_escape(card.tag);
  out += "</h1>\n";
  if (card.cite) {
    out += "<p class=\"card-cite\">";
    out += html_escape(*card.cite);
    out += "</p>\n";
  }
  out += "<div class=\"card-body\">";
  walk(
      *card.document, [&](std::string_view gap) { out += html_escape(gap); },
      [&](std::size_t i, std::string_view text) {
        const bool u = card.selection.underlined[i];
        const bool h = card.selection.highlighted[i];
        if (u) out += "<u>";
        if (h) out += "<mark>";
        out += html_escape(text);
        if (h) out += "</mark>";
        if (u) out += "</u>";
      });
  out += "</div>\n</body>\n</html>\n";
  return out;
}

SpanReport make_span_report(const CardDocument& card) {
  check_card(card);
  const auto& tokens = card.document->tokens;
  if (card.scores.size() != tokens.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "span report needs one score per token");
  }
  SpanReport report;
  report.settings = card.settings;
  for (const Token& t : tokens) {
    const double score = card.scores[t.index];
    if (card.selection.underlined[t.index]) {
      report.spans.push_back(
          {Tier::kUnderline, t.byte_start, t.byte_end, t.index, score});
    }
    if (card.selection.highlighted[t.index]) {
      report.spans.push_back(
          {Tier::kHighlight, t.byte_start, t.byte_end, t.index, score});
    }
  }
  return report;
}

nlohmann::json to_json(const CardSettings& settings) {
  return {
      {"window", settings.window},
      {"pooling", std::string(pooling_name(settings.mode))},
      {"underline_pct", settings.underline_pct},
      {"highlight_pct", settings.highlight_pct},
      {"embeddings", settings.embeddings},
  };
}

nlohmann::json to_json(const SpanReport& report) {
  nlohmann::json spans = nlohmann::json::array();
  for (const SpanRecord& r : report.spans) {
    spans.push_back({
        {"tier", std::string(tier_name(r.tier))},
        {"byte_start", r.byte_start},
        {"byte_end", r.byte_end},
        {"token_index", r.token_index},
        {"score", r.score},
    });
  }
  return {{"settings", to_json(report.settings)}, {"spans", std::move(spans)}};
}

std::string render_spans(const CardDocument& card) {
  return to_json(make_span_report(card)).dump(2) + "\n";
}

std::string render_card_text(const CardDocument& card) {
  check_card(card);
  std::string out = card.tag;
  out += "\n\n";
  if (card.cite) {
    out += *card.cite;
    out += "\n\n";
  }
  walk(
      *card.document, [&](std::string_view gap) { out.append(gap); },
      [&](std::size_t i, std::string_view text) {
        switch (emphasis_of(card.selection, i)) {
          case Emphasis::kHighlight:
            out.append("*").append(text).append("*");
            break;
          case Emphasis::kUnderline:
            out.append("_").append(text).append("_");
            break;
          case Emphasis::kNone:
            out.append(text);
            break;
        }
      });
  return out;
}

}  // namespace evsum
