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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <memory>
#include <sstream>

#include "evsum/core.hpp"
#include "evsum/embeddings.hpp"
#include "evsum/error.hpp"
#include "evsum/render.hpp"
#include "evsum/search.hpp"
#include "evsum/tokenizer.hpp"

#define STRINGIFY(x) #x
#define MACRO_STRINGIFY(x) STRINGIFY(x)

namespace py = pybind11;

namespace {

using evsum::TokenizedDocument;

std::shared_ptr<const TokenizedDocument> as_const(
    const std::shared_ptr<TokenizedDocument>& doc) {
  return doc;
}

evsum::CardDocument make_card(const std::shared_ptr<TokenizedDocument>& doc,
                              const evsum::ScoreVector& scores,
                              const evsum::SummarySelection& selection,
                              const std::string& tag,
                              std::optional<std::string> cite) {
  evsum::CardDocument card;
  card.tag = tag;
  card.cite = std::move(cite);
  card.document = as_const(doc);
  card.selection = selection;
  card.scores = scores.scores;
  card.settings.window = scores.fingerprint.window;
  card.settings.mode = scores.fingerprint.mode;
  card.settings.underline_pct = selection.underline_pct;
  card.settings.highlight_pct = selection.highlight_pct;
  return card;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Query-biased extractive summarization over static word vectors";

  static py::exception<evsum::Error> error(m, "EvsumError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const evsum::Error& e) {
      py::set_error(error, (std::string(evsum::error_code_name(e.code())) +
                            ": " + e.what())
                               .c_str());
    }
  });

  py::enum_<evsum::PoolingMode>(m, "PoolingMode")
      .value("MEAN", evsum::PoolingMode::kMean)
      .value("MAX", evsum::PoolingMode::kMax)
      .value("MIN", evsum::PoolingMode::kMin);

  py::enum_<evsum::VectorFormat>(m, "VectorFormat")
      .value("AUTO", evsum::VectorFormat::kAuto)
      .value("WORD2VEC_TEXT", evsum::VectorFormat::kWord2VecText)
      .value("GLOVE_TEXT", evsum::VectorFormat::kGloveText);

  py::class_<evsum::Token>(m, "Token")
      .def_readonly("text", &evsum::Token::text)
      .def_readonly("byte_start", &evsum::Token::byte_start)
      .def_readonly("byte_end", &evsum::Token::byte_end)
      .def_readonly("index", &evsum::Token::index)
      .def("__repr__", [](const evsum::Token& t) {
        std::ostringstream ss;
        ss << "Token(" << t.text << "@" << t.byte_start << ".." << t.byte_end
           << ")";
        return ss.str();
      });

  py::class_<TokenizedDocument, std::shared_ptr<TokenizedDocument>>(
      m, "TokenizedDocument")
      .def_readonly("source", &TokenizedDocument::source)
      .def_readonly("tokens", &TokenizedDocument::tokens)
      .def("__len__", &TokenizedDocument::size);

  m.def(
      "tokenize",
      [](std::string source) {
        return std::make_shared<TokenizedDocument>(
            evsum::tokenize(std::move(source)));
      },
      py::arg("source"));
  m.def("lookup_candidates",
        py::overload_cast<std::string_view>(&evsum::lookup_candidates),
        py::arg("text"));

  py::class_<evsum::EmbeddingTable, std::shared_ptr<evsum::EmbeddingTable>>(
      m, "EmbeddingTable")
      .def_static(
          "from_entries",
          [](std::string name, std::size_t dim,
             std::vector<evsum::EmbeddingTable::Entry> entries) {
            return std::make_shared<evsum::EmbeddingTable>(
                evsum::EmbeddingTable::from_entries(std::move(name), dim,
                                                    std::move(entries)));
          },
          py::arg("name"), py::arg("dimension"), py::arg("entries"))
      .def_property_readonly("name", &evsum::EmbeddingTable::name)
      .def_property_readonly("dimension", &evsum::EmbeddingTable::dimension)
      .def_property_readonly("duplicate_count",
                             &evsum::EmbeddingTable::duplicate_count)
      .def("__len__", &evsum::EmbeddingTable::size)
      .def("get",
           [](const evsum::EmbeddingTable& t,
              const std::string& token) -> std::optional<std::vector<float>> {
             auto hit = t.find(token);
             if (!hit) return std::nullopt;
             return std::vector<float>(hit->begin(), hit->end());
           });

  m.def(
      "load_vectors",
      [](const std::filesystem::path& path, evsum::VectorFormat format) {
        return std::make_shared<evsum::EmbeddingTable>(
            evsum::load_vectors(path, format));
      },
      py::arg("path"), py::arg("format") = evsum::VectorFormat::kAuto);
  m.def(
      "load_vectors_text",
      [](const std::string& text, evsum::VectorFormat format, std::string name) {
        std::istringstream in(text);
        return std::make_shared<evsum::EmbeddingTable>(
            evsum::load_vectors(in, format, std::move(name)));
      },
      py::arg("text"), py::arg("format") = evsum::VectorFormat::kAuto,
      py::arg("name") = "<memory>");

  py::class_<evsum::EmbeddingStack, std::shared_ptr<evsum::EmbeddingStack>>(
      m, "EmbeddingStack")
      .def(py::init([](const std::vector<std::shared_ptr<evsum::EmbeddingTable>>&
                           tables) {
             return std::make_shared<evsum::EmbeddingStack>(
                 std::vector<std::shared_ptr<const evsum::EmbeddingTable>>(
                     tables.begin(), tables.end()));
           }),
           py::arg("tables"))
      .def_property_readonly("total_dimension",
                             &evsum::EmbeddingStack::total_dimension)
      .def_property_readonly("names", &evsum::EmbeddingStack::names)
      .def("lookup", &evsum::EmbeddingStack::lookup, py::arg("token"));

  m.def(
      "pool",
      [](const std::vector<std::vector<float>>& vectors, evsum::PoolingMode mode) {
        return evsum::pool(vectors, mode);
      },
      py::arg("vectors"), py::arg("mode") = evsum::PoolingMode::kMean);

  m.def(
      "window_bounds",
      [](std::size_t i, std::size_t n, std::size_t window) {
        const auto b = evsum::window_bounds(i, n, evsum::WindowSpec{window});
        return py::make_tuple(b.lo, b.hi);
      },
      py::arg("i"), py::arg("n"), py::arg("window"));

  m.def(
      "query_vector",
      [](const std::string& query, const TokenizedDocument& doc,
         const evsum::EmbeddingStack& stack, evsum::PoolingMode mode) {
        return evsum::query_vector(evsum::BiasQuery::parse(query), doc, stack,
                                   mode);
      },
      py::arg("query"), py::arg("doc"), py::arg("stack"),
      py::arg("mode") = evsum::PoolingMode::kMean);

  m.def(
      "cosine",
      [](const std::vector<double>& a, const std::vector<double>& b) {
        return evsum::cosine(a, b);
      },
      py::arg("a"), py::arg("b"));

  py::class_<evsum::ScoreVector>(m, "ScoreVector")
      .def_readonly("scores", &evsum::ScoreVector::scores)
      .def_property_readonly(
          "fingerprint",
          [](const evsum::ScoreVector& s) { return s.fingerprint.key(); })
      .def("__len__", &evsum::ScoreVector::size);

  m.def(
      "score_document",
      [](const TokenizedDocument& doc, const evsum::EmbeddingStack& stack,
         const std::string& query, std::size_t window, evsum::PoolingMode mode) {
        return evsum::score_document(doc, stack, evsum::WindowSpec{window},
                                     mode, evsum::BiasQuery::parse(query));
      },
      py::arg("doc"), py::arg("stack"), py::arg("query"),
      py::arg("window") = evsum::kDefaultWindow,
      py::arg("mode") = evsum::PoolingMode::kMean,
      "Scores every token; query \"-1\" is the unbiased sentinel.");

  py::class_<evsum::SummarySelection>(m, "SummarySelection")
      .def_readonly("underlined", &evsum::SummarySelection::underlined)
      .def_readonly("highlighted", &evsum::SummarySelection::highlighted)
      .def_readonly("underline_pct", &evsum::SummarySelection::underline_pct)
      .def_readonly("highlight_pct", &evsum::SummarySelection::highlight_pct)
      .def("underline_count", &evsum::SummarySelection::underline_count)
      .def("highlight_count", &evsum::SummarySelection::highlight_count);

  m.def("select", &evsum::select, py::arg("scores"),
        py::arg("underline_pct") = evsum::kDefaultUnderlinePct,
        py::arg("highlight_pct") = evsum::kDefaultHighlightPct);
  m.def("resummarize", &evsum::resummarize, py::arg("scores"),
        py::arg("underline_pct"), py::arg("highlight_pct"));

  py::class_<evsum::SearchHit>(m, "SearchHit")
      .def_readonly("token_index", &evsum::SearchHit::token_index)
      .def_readonly("byte_start", &evsum::SearchHit::byte_start)
      .def_readonly("byte_end", &evsum::SearchHit::byte_end)
      .def_readonly("score", &evsum::SearchHit::score)
      .def_readonly("rank", &evsum::SearchHit::rank);

  m.def(
      "search",
      [](const TokenizedDocument& doc, const evsum::EmbeddingStack& stack,
         const std::string& query, std::size_t k, std::size_t window,
         evsum::PoolingMode mode, bool dedupe) {
        evsum::SearchOptions options;
        options.window = evsum::WindowSpec{window};
        options.mode = mode;
        options.top_k = k;
        options.dedupe = dedupe;
        return evsum::search(doc, stack, evsum::BiasQuery::parse(query),
                             options);
      },
      py::arg("doc"), py::arg("stack"), py::arg("query"), py::arg("k") = 10,
      py::arg("window") = evsum::kDefaultWindow,
      py::arg("mode") = evsum::PoolingMode::kMean, py::arg("dedupe") = true);

  m.def(
      "render",
      [](const std::shared_ptr<TokenizedDocument>& doc,
         const evsum::ScoreVector& scores,
         const evsum::SummarySelection& selection, const std::string& format,
         const std::string& tag, std::optional<std::string> cite) {
        const evsum::CardDocument card =
            make_card(doc, scores, selection, tag, std::move(cite));
        if (format == "ansi") return evsum::render_terminal(card);
        if (format == "html") return evsum::render_html(card);
        if (format == "card") return evsum::render_card_text(card);
        if (format == "spans") return evsum::render_spans(card);
        throw evsum::Error(evsum::ErrorCode::kInvalidArgument,
                           "format must be ansi, html, card or spans");
      },
      py::arg("doc"), py::arg("scores"), py::arg("selection"),
      py::arg("format") = "ansi", py::arg("tag") = "",
      py::arg("cite") = py::none());

#ifdef VERSION_INFO
  m.attr("__version__") = MACRO_STRINGIFY(VERSION_INFO);
#else
  m.attr("__version__") = "dev";
#endif
}
