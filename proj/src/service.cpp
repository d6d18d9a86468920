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

#include "evsum/service.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include <httplib.h>

#include "evsum/error.hpp"
#include "evsum/render.hpp"
#include "evsum/search.hpp"

namespace evsum {

namespace {

using json = nlohmann::json;

// Request validation failure carrying an HTTP status.
struct ApiError {
  int status;
  std::string code;
  std::string message;
};

ApiResponse error_response(int status, std::string_view code,
                           const std::string& message) {
  return {status, json{{"code", code}, {"message", message}}};
}

ApiResponse error_response(const ApiError& e) {
  return error_response(e.status, e.code, e.message);
}

json parse_body(const std::string& body) {
  if (body.empty()) return json::object();
  json j = json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) {
    throw ApiError{400, "BadRequest", "request body is not valid JSON"};
  }
  if (!j.is_object()) {
    throw ApiError{400, "BadRequest", "request body must be a JSON object"};
  }
  return j;
}

ApiError bad_params(const std::string& message) {
  return {422, "BadParams", message};
}

std::size_t positive_int(const json& j, const char* key, std::size_t fallback) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  if (!it->is_number_integer() || it->get<long long>() < 1) {
    throw bad_params(std::string(key) + " must be an integer >= 1");
  }
  return it->get<std::size_t>();
}

double percent(const json& j, const char* key, double fallback) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  if (!it->is_number()) throw bad_params(std::string(key) + " must be a number");
  const double v = it->get<double>();
  if (!(v >= 0.0 && v <= 100.0)) {
    throw bad_params(std::string(key) + " must lie in [0, 100]");
  }
  return v;
}

std::optional<std::string> optional_string(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw bad_params(std::string(key) + " must be a string");
  return it->get<std::string>();
}

PoolingMode pooling_param(const json& j, PoolingMode fallback) {
  const auto name = optional_string(j, "pooling");
  if (!name) return fallback;
  try {
    return parse_pooling(*name);
  } catch (const Error&) {
    throw bad_params("pooling must be one of mean, max, min");
  }
}

BiasQuery query_param(const json& j) {
  const auto q = optional_string(j, "query");
  if (!q) throw bad_params("query is required (\"-1\" for unbiased)");
  return BiasQuery::parse(*q);
}

ApiResponse domain_error(const Error& e) {
  switch (e.code()) {
    case ErrorCode::kEmptyDocument:
      return error_response(400, error_code_name(e.code()), e.what());
    case ErrorCode::kEmptyQuery:
    case ErrorCode::kUnbiasedQueryNotSearchable:
      return error_response(422, error_code_name(e.code()), e.what());
    case ErrorCode::kPercentOutOfRange:
    case ErrorCode::kInvalidWindow:
    case ErrorCode::kInvalidArgument:
      return error_response(422, "BadParams", e.what());
    default:
      return error_response(500, error_code_name(e.code()), e.what());
  }
}

// Runs a handler body, translating failures into error responses.
template <typename Fn>
ApiResponse guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const ApiError& e) {
    return error_response(e);
  } catch (const Error& e) {
    return domain_error(e);
  } catch (const std::exception& e) {
    return error_response(500, "Internal", e.what());
  }
}

ApiError unknown_document(const std::string& id) {
  return {404, "UnknownDocument", "no document with id '" + id + "'"};
}

}  // namespace

ServiceConfig ServiceConfig::from_json(const json& j,
                                       const std::filesystem::path& base_dir) {
  if (!j.is_object()) {
    throw Error(ErrorCode::kInvalidArgument, "service config must be an object");
  }
  ServiceConfig c;
  try {
    c.host = j.value("host", c.host);
    c.port = j.value("port", c.port);
    for (const auto& p : j.value("embeddings", std::vector<std::string>{})) {
      std::filesystem::path path(p);
      if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
      c.embeddings.push_back(path);
    }
    c.default_window = j.value("window", c.default_window);
    if (j.contains("pooling")) {
      c.default_pooling = parse_pooling(j.at("pooling").get<std::string>());
    }
    c.max_document_bytes = j.value("max_document_bytes", c.max_document_bytes);
    c.session_ttl = std::chrono::seconds(
        j.value("session_ttl_seconds", static_cast<long long>(c.session_ttl.count())));
    c.score_cache_capacity =
        j.value("score_cache_capacity", c.score_cache_capacity);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("bad service config: ") + e.what());
  }
  c.validate();
  return c;
}

ServiceConfig ServiceConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  json j = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) {
    throw Error(ErrorCode::kInvalidArgument,
                path.string() + " is not valid JSON");
  }
  return from_json(j, path.parent_path());
}

void ServiceConfig::validate() const {
  if (embeddings.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "service config needs at least one embedding path");
  }
  if (max_document_bytes < 1) {
    throw Error(ErrorCode::kInvalidArgument, "max_document_bytes must be >= 1");
  }
  if (default_window < 1) {
    throw Error(ErrorCode::kInvalidArgument, "window must be >= 1");
  }
  if (score_cache_capacity < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "score_cache_capacity must be >= 1");
  }
  if (port < 0 || port > 65535) {
    throw Error(ErrorCode::kInvalidArgument, "port out of range");
  }
}

std::shared_ptr<const EmbeddingStack> load_stack(
    const std::vector<std::filesystem::path>& paths) {
  std::vector<std::shared_ptr<const EmbeddingTable>> tables;
  for (const auto& p : paths) {
    tables.push_back(std::make_shared<const EmbeddingTable>(load_vectors(p)));
  }
  return std::make_shared<const EmbeddingStack>(std::move(tables));
}

std::shared_ptr<const ScoreVector> ScoreCache::get(const std::string& key) {
  std::lock_guard lock(mu_);
  const auto it = index_.find(key);
  if (it == index_.end()) return nullptr;
  lru_.splice(lru_.begin(), lru_, it->second);
  return it->second->second;
}

void ScoreCache::put(const std::string& key,
                     std::shared_ptr<const ScoreVector> scores) {
  std::lock_guard lock(mu_);
  if (const auto it = index_.find(key); it != index_.end()) {
    it->second->second = std::move(scores);
    lru_.splice(lru_.begin(), lru_, it->second);
    return;
  }
  lru_.emplace_front(key, std::move(scores));
  index_[key] = lru_.begin();
  while (lru_.size() > capacity_) {
    index_.erase(lru_.back().first);
    lru_.pop_back();
  }
}

std::size_t ScoreCache::size() const {
  std::lock_guard lock(mu_);
  return lru_.size();
}

SummaryService::SummaryService(ServiceConfig config,
                               std::shared_ptr<const EmbeddingStack> stack,
                               Clock clock)
    : config_(std::move(config)),
      stack_(std::move(stack)),
      clock_(std::move(clock)),
      rng_(std::random_device{}()) {
  if (!stack_) {
    throw Error(ErrorCode::kInvalidArgument, "service needs an embedding stack");
  }
}

std::string SummaryService::new_id() {
  // Caller holds mu_.
  char buf[33];
  std::snprintf(buf, sizeof buf, "%016llx%016llx",
                static_cast<unsigned long long>(rng_()),
                static_cast<unsigned long long>(rng_()));
  return buf;
}

void SummaryService::expire_locked(std::chrono::steady_clock::time_point now) {
  for (auto it = sessions_.begin(); it != sessions_.end();) {
    if (now - it->second->created_at >= config_.session_ttl) {
      it = sessions_.erase(it);
    } else {
      ++it;
    }
  }
}

std::shared_ptr<DocumentSession> SummaryService::find_session(
    const std::string& id) {
  std::lock_guard lock(mu_);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) return nullptr;
  if (clock_() - it->second->created_at >= config_.session_ttl) {
    sessions_.erase(it);
    return nullptr;
  }
  return it->second;
}

std::size_t SummaryService::session_count() const {
  std::lock_guard lock(mu_);
  return sessions_.size();
}

SummaryService::Scored SummaryService::scores_for(DocumentSession& session,
                                                  const BiasQuery& query,
                                                  WindowSpec window,
                                                  PoolingMode mode) {
  const TokenizedDocument& doc = *session.document;
  const std::vector<double> qvec = query_vector(query, doc, *stack_, mode);
  const std::string key =
      make_fingerprint(doc, *stack_, window, mode, qvec).key();
  if (auto cached = session.cache.get(key)) return {std::move(cached), true};
  auto scores = std::make_shared<const ScoreVector>(
      score_document(doc, *stack_, window, mode, qvec));
  session.cache.put(key, scores);
  return {std::move(scores), false};
}

ApiResponse SummaryService::create_document(const std::string& body) {
  return guarded([&]() -> ApiResponse {
    const json j = parse_body(body);
    const auto it = j.find("text");
    if (it == j.end() || !it->is_string()) {
      throw ApiError{400, "BadRequest", "body needs a string field 'text'"};
    }
    std::string text = it->get<std::string>();
    if (text.size() > config_.max_document_bytes) {
      throw ApiError{413, "TooLarge",
                     "document exceeds " +
                         std::to_string(config_.max_document_bytes) + " bytes"};
    }
    auto doc = std::make_shared<const TokenizedDocument>(tokenize(std::move(text)));
    if (doc->empty()) {
      throw ApiError{400, "EmptyDocument", "document has no tokens"};
    }
    const auto now = clock_();
    std::lock_guard lock(mu_);
    expire_locked(now);
    std::string id;
    do {
      id = new_id();
    } while (sessions_.count(id) != 0);
    const std::size_t count = doc->size();
    sessions_.emplace(id, std::make_shared<DocumentSession>(
                              id, std::move(doc), now,
                              config_.score_cache_capacity));
    return {201, json{{"id", id}, {"token_count", count}}};
  });
}

ApiResponse SummaryService::summarize(const std::string& id,
                                      const std::string& body) {
  return guarded([&]() -> ApiResponse {
    const json j = parse_body(body);
    const auto session = find_session(id);
    if (!session) throw unknown_document(id);

    const BiasQuery query = query_param(j);
    const WindowSpec window{positive_int(j, "window", config_.default_window)};
    const PoolingMode mode = pooling_param(j, config_.default_pooling);
    const double u = percent(j, "underline_pct", kDefaultUnderlinePct);
    const double h = percent(j, "highlight_pct", kDefaultHighlightPct);
    const std::string format = optional_string(j, "format").value_or("spans");
    if (format != "spans" && format != "html" && format != "card") {
      throw bad_params("format must be one of spans, html, card");
    }

    const Scored scored = scores_for(*session, query, window, mode);
    CardDocument card;
    card.tag = optional_string(j, "tag").value_or(
        query.is_unbiased() ? std::string("Unbiased summary")
                            : query.query_text());
    card.cite = optional_string(j, "cite");
    card.document = session->document;
    card.selection = resummarize(*scored.scores, u, h);
    card.scores = scored.scores->scores;
    card.settings = {window.size, mode, u, h, stack_->names()};

    json out{
        {"id", id},
        {"format", format},
        {"cache_hit", scored.cache_hit},
        {"fingerprint", scored.scores->fingerprint.key()},
        {"token_count", session->document->size()},
        {"underline_count", card.selection.underline_count()},
        {"highlight_count", card.selection.highlight_count()},
    };
    if (format == "spans") {
      out["result"] = to_json(make_span_report(card));
    } else if (format == "html") {
      out["result"] = render_html(card);
    } else {
      out["result"] = render_card_text(card);
    }
    return {200, std::move(out)};
  });
}

ApiResponse SummaryService::search(const std::string& id,
                                   const std::string& body) {
  return guarded([&]() -> ApiResponse {
    const json j = parse_body(body);
    const auto session = find_session(id);
    if (!session) throw unknown_document(id);

    const BiasQuery query = query_param(j);
    if (query.is_unbiased()) {
      throw ApiError{422, "UnbiasedQueryNotSearchable",
                     "the unbiased query cannot be searched for"};
    }
    const WindowSpec window{positive_int(j, "window", config_.default_window)};
    const PoolingMode mode = pooling_param(j, config_.default_pooling);
    const std::size_t k = positive_int(j, "k", 10);
    bool dedupe = true;
    if (const auto it = j.find("dedupe"); it != j.end() && !it->is_null()) {
      if (!it->is_boolean()) throw bad_params("dedupe must be a boolean");
      dedupe = it->get<bool>();
    }

    const Scored scored = scores_for(*session, query, window, mode);
    const TokenizedDocument& doc = *session->document;
    json hits = json::array();
    for (const SearchHit& hit : rank_hits(doc, *scored.scores, window, k, dedupe)) {
      hits.push_back({
          {"rank", hit.rank},
          {"token_index", hit.token_index},
          {"byte_start", hit.byte_start},
          {"byte_end", hit.byte_end},
          {"score", hit.score},
          {"text", doc.source.substr(hit.byte_start,
                                     hit.byte_end - hit.byte_start)},
      });
    }
    return {200, json{{"id", id},
                      {"cache_hit", scored.cache_hit},
                      {"fingerprint", scored.scores->fingerprint.key()},
                      {"hits", std::move(hits)}}};
  });
}

ApiResponse SummaryService::delete_document(const std::string& id) {
  std::lock_guard lock(mu_);
  sessions_.erase(id);
  return {200, json{{"id", id}, {"deleted", true}}};
}

ApiResponse SummaryService::health() const {
  json tables = json::array();
  for (const auto& t : stack_->tables()) {
    tables.push_back({{"name", t->name()},
                      {"dimension", t->dimension()},
                      {"entries", t->size()}});
  }
  return {200, json{{"status", "ok"},
                    {"tables_loaded", stack_->tables().size()},
                    {"embedding_tables", std::move(tables)},
                    {"total_dimension", stack_->total_dimension()},
                    {"sessions", session_count()}}};
}

HttpFrontend::HttpFrontend(SummaryService& service)
    : service_(service), server_(std::make_unique<httplib::Server>()) {
  auto reply = [](httplib::Response& res, const ApiResponse& r) {
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };
  server_->set_default_headers({
      {"Access-Control-Allow-Origin", "*"},
      {"Access-Control-Allow-Headers", "Content-Type"},
      {"Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS"},
  });
  server_->Options(R"(/v1/.*)", [](const httplib::Request&,
                                   httplib::Response& res) { res.status = 204; });
  server_->Post("/v1/documents",
                [this, reply](const httplib::Request& req, httplib::Response& res) {
                  reply(res, service_.create_document(req.body));
                });
  server_->Post(R"(/v1/documents/([^/]+)/summary)",
                [this, reply](const httplib::Request& req, httplib::Response& res) {
                  reply(res, service_.summarize(req.matches[1], req.body));
                });
  server_->Post(R"(/v1/documents/([^/]+)/search)",
                [this, reply](const httplib::Request& req, httplib::Response& res) {
                  reply(res, service_.search(req.matches[1], req.body));
                });
  server_->Delete(R"(/v1/documents/([^/]+))",
                  [this, reply](const httplib::Request& req, httplib::Response& res) {
                    reply(res, service_.delete_document(req.matches[1]));
                  });
  server_->Get("/v1/health",
               [this, reply](const httplib::Request&, httplib::Response& res) {
                 reply(res, service_.health());
               });
  server_->set_payload_max_length(service_.config().max_document_bytes * 2 + 4096);
}

HttpFrontend::~HttpFrontend() { stop(); }

int HttpFrontend::bind(const std::string& host, int port) {
  if (port == 0) return server_->bind_to_any_port(host);
  return server_->bind_to_port(host, port) ? port : -1;
}

bool HttpFrontend::listen_after_bind() { return server_->listen_after_bind(); }

void HttpFrontend::stop() {
  if (server_ && server_->is_running()) server_->stop();
}

void HttpFrontend::wait_until_ready() const { server_->wait_until_ready(); }

int run_service(const ServiceConfig& config) {
  std::shared_ptr<const EmbeddingStack> stack;
  try {
    config.validate();
    stack = load_stack(config.embeddings);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  SummaryService service(config, stack);
  HttpFrontend http(service);
  const int port = http.bind(config.host, config.port);
  if (port < 0) {
    std::cerr << "error: cannot bind " << config.host << ":" << config.port
              << "\n";
    return 1;
  }
  std::cerr << "listening on " << config.host << ":" << port << " ("
            << stack->total_dimension() << "-dim stack)\n";
  return http.listen_after_bind() ? 0 : 1;
}

}  // namespace evsum
