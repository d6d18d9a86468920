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

#include "evsum/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "evsum/error.hpp"
#include "evsum/search.hpp"
#include "evsum/service.hpp"

namespace evsum::cli {

namespace {

namespace fs = std::filesystem;

const std::map<std::string, int>& color_codes() {
  static const std::map<std::string, int> codes = {
      {"black", 40}, {"red", 41},     {"green", 42}, {"yellow", 43},
      {"blue", 44},  {"magenta", 45}, {"cyan", 46},  {"white", 47},
  };
  return codes;
}

std::string read_all(std::istream& in) {
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string with_newline(std::string s) {
  if (s.empty() || s.back() != '\n') s += '\n';
  return s;
}

std::string default_tag(const CliConfig& config, const BiasQuery& query) {
  if (config.tag) return *config.tag;
  return query.is_unbiased() ? std::string("Unbiased summary")
                             : query.query_text();
}

// Reads until end-of-file or a line holding a single '.'. The stream state
// is cleared afterwards so a terminal can keep answering prompts.
std::optional<std::string> read_document(std::istream& in) {
  std::string doc;
  std::string line;
  bool any = false;
  while (std::getline(in, line)) {
    if (line == "." || line == ".\r") break;
    if (any) doc += '\n';
    doc += line;
    any = true;
  }
  if (in.bad()) return std::nullopt;
  in.clear();
  return doc;
}

// Returns false on end-of-file.
bool prompt_line(std::istream& in, std::ostream& err, const std::string& prompt,
                 std::string* answer) {
  err << prompt << std::flush;
  if (!std::getline(in, *answer)) {
    in.clear();
    err << "\n";
    return false;
  }
  if (!answer->empty() && answer->back() == '\r') answer->pop_back();
  return true;
}

bool yes(const std::string& s) {
  const auto first = s.find_first_not_of(" \t");
  return first != std::string::npos && (s[first] == 'y' || s[first] == 'Y');
}

double prompt_percent(std::istream& in, std::ostream& err,
                      const std::string& label, double fallback) {
  for (;;) {
    std::ostringstream prompt;
    prompt << label << " percent [" << fallback << "]: ";
    std::string answer;
    if (!prompt_line(in, err, prompt.str(), &answer)) return fallback;
    if (answer.find_first_not_of(" \t") == std::string::npos) return fallback;
    try {
      std::size_t used = 0;
      const double v = std::stod(answer, &used);
      if (v >= 0.0 && v <= 100.0 &&
          answer.find_first_not_of(" \t", used) == std::string::npos) {
        return v;
      }
    } catch (const std::exception&) {
    }
    err << "error: enter a number between 0 and 100\n";
  }
}

}  // namespace

OutputFormat parse_format(std::string_view name) {
  if (name == "ansi") return OutputFormat::kAnsi;
  if (name == "html") return OutputFormat::kHtml;
  if (name == "card") return OutputFormat::kCard;
  if (name == "spans") return OutputFormat::kSpans;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown format '" + std::string(name) + "'");
}

std::vector<fs::path> resolve_embedding_paths(
    const std::vector<fs::path>& explicit_paths) {
  const char* env = std::getenv(kEmbeddingsDirEnv);
  const fs::path dir = env ? fs::path(env) : fs::path();

  std::vector<fs::path> out;
  if (!explicit_paths.empty()) {
    for (const fs::path& p : explicit_paths) {
      if (p.is_relative() && !dir.empty() && !fs::exists(p) &&
          fs::exists(dir / p)) {
        out.push_back(dir / p);
      } else {
        out.push_back(p);
      }
    }
    return out;
  }
  std::error_code ec;
  if (dir.empty() || !fs::is_directory(dir, ec)) return out;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    const auto ext = entry.path().extension();
    if (entry.is_regular_file() && (ext == ".txt" || ext == ".vec")) {
      out.push_back(entry.path());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

ScoreVector score(const TokenizedDocument& doc, const EmbeddingStack& stack,
                  const CliConfig& config, const BiasQuery& query) {
  return score_document(doc, stack, WindowSpec{config.window}, config.pooling,
                        query);
}

std::string render_summary(std::shared_ptr<const TokenizedDocument> doc,
                           const ScoreVector& scores,
                           const EmbeddingStack& stack,
                           const CliConfig& config, const BiasQuery& query) {
  CardDocument card;
  card.tag = default_tag(config, query);
  card.cite = config.cite;
  card.document = std::move(doc);
  card.selection =
      resummarize(scores, config.underline_pct, config.highlight_pct);
  card.scores = scores.scores;
  card.settings = {config.window, config.pooling, config.underline_pct,
                   config.highlight_pct, stack.names()};
  switch (config.format) {
    case OutputFormat::kAnsi:
      return with_newline(render_terminal(card, config.terminal));
    case OutputFormat::kHtml:
      return render_html(card, config.html);
    case OutputFormat::kCard:
      return with_newline(render_card_text(card));
    case OutputFormat::kSpans:
      return render_spans(card);
  }
  return {};
}

std::string render_search(const TokenizedDocument& doc,
                          const EmbeddingStack& stack, const CliConfig& config,
                          const BiasQuery& query) {
  SearchOptions options;
  options.window = WindowSpec{config.window};
  options.mode = config.pooling;
  options.top_k = config.top_k;
  options.dedupe = config.dedupe;
  const std::vector<SearchHit> hits = search(doc, stack, query, options);

  if (config.format == OutputFormat::kSpans) {
    nlohmann::json j = nlohmann::json::array();
    for (const SearchHit& h : hits) {
      j.push_back({{"rank", h.rank},
                   {"token_index", h.token_index},
                   {"byte_start", h.byte_start},
                   {"byte_end", h.byte_end},
                   {"score", h.score}});
    }
    return nlohmann::json{{"query", query.query_text()}, {"hits", j}}.dump(2) +
           "\n";
  }
  std::ostringstream out;
  for (const SearchHit& h : hits) {
    char score[32];
    std::snprintf(score, sizeof score, "%.6f", h.score);
    out << h.rank << "\t" << score << "\t" << h.byte_start << "\t"
        << h.byte_end << "\t"
        << doc.source.substr(h.byte_start, h.byte_end - h.byte_start) << "\n";
  }
  return out.str();
}

int run_batch(const CliConfig& config, const EmbeddingStack& stack,
              std::istream& in, std::ostream& out, std::ostream& err) {
  if (!config.query) {
    err << "error: batch mode needs --query (use \"-1\" for unbiased)\n";
    return 1;
  }
  std::string text;
  if (!config.input || *config.input == "-") {
    text = read_all(in);
  } else {
    std::ifstream file(*config.input, std::ios::binary);
    if (!file) {
      err << "error: cannot open " << config.input->string() << "\n";
      return 1;
    }
    text = read_all(file);
  }

  try {
    auto doc = std::make_shared<const TokenizedDocument>(tokenize(std::move(text)));
    const BiasQuery query = BiasQuery::parse(*config.query);
    if (config.search) {
      out << render_search(*doc, stack, config, query);
    } else {
      const ScoreVector scores = score(*doc, stack, config, query);
      out << render_summary(doc, scores, stack, config, query);
    }
  } catch (const Error& e) {
    err << "error: " << error_code_name(e.code()) << ": " << e.what() << "\n";
    return 1;
  }
  out.flush();
  return out ? 0 : 1;
}

int run_interactive(const CliConfig& config, const EmbeddingStack& stack,
                    std::istream& in, std::ostream& out, std::ostream& err) {
  CliConfig current = config;
  for (;;) {
    std::string query_text;
    if (current.query) {
      query_text = *current.query;
    } else if (!prompt_line(in, err,
                            "Bias query (\"-1\" for an unbiased summary): ",
                            &query_text)) {
      return 0;
    }
    const BiasQuery query = BiasQuery::parse(query_text);

    err << "Enter the document, then press Ctrl-D (or a line with a single "
           "'.'):\n";
    const std::optional<std::string> text = read_document(in);
    if (!text) {
      err << "error: failed to read the document\n";
      return 1;
    }
    auto doc = std::make_shared<const TokenizedDocument>(tokenize(*text));

    try {
      if (doc->empty()) {
        throw Error(ErrorCode::kEmptyDocument, "document has no tokens");
      }
      if (current.search) {
        out << render_search(*doc, stack, current, query) << std::flush;
      } else {
        const ScoreVector scores = score(*doc, stack, current, query);
        bool again = true;
        while (again) {
          current.underline_pct =
              prompt_percent(in, err, "Underline", current.underline_pct);
          current.highlight_pct =
              prompt_percent(in, err, "Highlight", current.highlight_pct);
          out << render_summary(doc, scores, stack, current, query)
              << std::flush;
          std::string answer;
          again = prompt_line(in, err, "Re-threshold this document? [y/N]: ",
                              &answer) &&
                  yes(answer);
        }
      }
    } catch (const Error& e) {
      err << "error: " << error_code_name(e.code()) << ": " << e.what() << "\n";
    }
    if (!out) return 1;

    std::string answer;
    if (!prompt_line(in, err, "Summarize another document? [y/N]: ", &answer) ||
        !yes(answer)) {
      return 0;
    }
  }
}

int run(int argc, const char* const* argv, std::istream& in, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Query-biased word-level extractive summarizer and semantic find"};
  CliConfig config;
  std::vector<std::string> embeddings;
  std::string pooling = "mean";
  std::string format = "ansi";
  std::string color = "yellow";
  std::string query;
  std::string input;
  std::string tag;
  std::string cite;
  std::string serve;
  bool no_dedupe = false;

  app.add_option("-e,--embeddings", embeddings,
                 "Word-vector text file (GloVe or word2vec); repeat to stack");
  app.add_option("-w,--window", config.window, "Word-window size")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--pooling", pooling, "Pooling mode")
      ->check(CLI::IsMember({"mean", "max", "min"}))
      ->capture_default_str();
  app.add_option("-u,--underline", config.underline_pct, "Percent of tokens underlined")
      ->check(CLI::Range(0.0, 100.0))
      ->capture_default_str();
  app.add_option("--highlight", config.highlight_pct, "Percent of tokens highlighted")
      ->check(CLI::Range(0.0, 100.0))
      ->capture_default_str();
  app.add_option("-f,--format", format, "Output format")
      ->check(CLI::IsMember({"ansi", "html", "card", "spans"}))
      ->capture_default_str();
  app.add_option("--highlight-color", color, "Highlight color (terminal and HTML)")
      ->check(CLI::IsMember({"black", "red", "green", "yellow", "blue",
                             "magenta", "cyan", "white"}))
      ->capture_default_str();
  auto* query_opt =
      app.add_option("-q,--query", query, "Bias query; \"-1\" for unbiased");
  auto* input_opt = app.add_option(
      "-i,--input", input, "Document file for batch mode ('-' for stdin)");
  auto* tag_opt = app.add_option("--tag", tag, "Card tag line (defaults to the query)");
  auto* cite_opt = app.add_option("--cite", cite, "Card citation line");
  app.add_flag("--search", config.search, "Semantic find instead of summarizing");
  app.add_option("-k,--top-k", config.top_k, "Number of search hits")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_flag("--no-dedupe", no_dedupe, "Allow overlapping search hits");
  auto* serve_opt =
      app.add_option("--serve", serve, "Run the HTTP service with this JSON config");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 1;
  }

  if (*serve_opt) {
    try {
      return run_service(ServiceConfig::load(serve));
    } catch (const Error& e) {
      err << "error: " << error_code_name(e.code()) << ": " << e.what() << "\n";
      return e.code() == ErrorCode::kIo ? 1 : 2;
    }
  }

  config.pooling = parse_pooling(pooling);
  config.format = parse_format(format);
  config.dedupe = !no_dedupe;
  config.terminal.highlight_on = color_codes().at(color);
  config.html.highlight_color = color;
  if (*query_opt) config.query = query;
  if (*input_opt) config.input = fs::path(input);
  if (*tag_opt) config.tag = tag;
  if (*cite_opt) config.cite = cite;
  config.embeddings = resolve_embedding_paths(
      std::vector<fs::path>(embeddings.begin(), embeddings.end()));
  if (config.embeddings.empty()) {
    err << "error: no embeddings given (use --embeddings or set "
        << kEmbeddingsDirEnv << ")\n";
    return 2;
  }

  std::shared_ptr<const EmbeddingStack> stack;
  try {
    stack = load_stack(config.embeddings);
  } catch (const Error& e) {
    err << "error: loading embeddings: " << e.what() << "\n";
    return 2;
  }

  if (config.input) return run_batch(config, *stack, in, out, err);
  return run_interactive(config, *stack, in, out, err);
}

}  // namespace evsum::cli
