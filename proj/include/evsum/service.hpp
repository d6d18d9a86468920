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

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <list>
#include <memory>
#include <mutex>
#include <random>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "evsum/core.hpp"
#include "evsum/embeddings.hpp"
#include "evsum/tokenizer.hpp"

namespace httplib {
class Server;
}

namespace evsum {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::vector<std::filesystem::path> embeddings;
  std::size_t default_window = kDefaultWindow;
  PoolingMode default_pooling = PoolingMode::kMean;
  std::size_t max_document_bytes = 4 << 20;
  std::chrono::seconds session_ttl{3600};
  std::size_t score_cache_capacity = 16;

  // Relative embedding paths resolve against base_dir. Throws
  // kInvalidArgument when an invariant is violated.
  static ServiceConfig from_json(const nlohmann::json& j,
                                 const std::filesystem::path& base_dir = {});
  static ServiceConfig load(const std::filesystem::path& path);
  void validate() const;
};

// Loads each path in order into one stack. Throws Error / LoadError.
std::shared_ptr<const EmbeddingStack> load_stack(
    const std::vector<std::filesystem::path>& paths);

struct ApiResponse {
  int status = 200;
  nlohmann::json body;
};

// Least-recently-used map from fingerprint key to scores.
class ScoreCache {
 public:
  explicit ScoreCache(std::size_t capacity) : capacity_(capacity) {}

  std::shared_ptr<const ScoreVector> get(const std::string& key);
  void put(const std::string& key, std::shared_ptr<const ScoreVector> scores);
  std::size_t size() const;

 private:
  using Entry = std::pair<std::string, std::shared_ptr<const ScoreVector>>;

  std::size_t capacity_;
  mutable std::mutex mu_;
  std::list<Entry> lru_;  // front = most recent
  std::unordered_map<std::string, std::list<Entry>::iterator> index_;
};

struct DocumentSession {
  std::string id;
  std::shared_ptr<const TokenizedDocument> document;
  std::chrono::steady_clock::time_point created_at;
  ScoreCache cache;

  DocumentSession(std::string id_, std::shared_ptr<const TokenizedDocument> doc,
                  std::chrono::steady_clock::time_point created,
                  std::size_t cache_capacity)
      : id(std::move(id_)),
        document(std::move(doc)),
        created_at(created),
        cache(cache_capacity) {}
};

// Transport-independent request handling. Every method is safe to call from
// concurrent threads.
class SummaryService {
 public:
  using Clock = std::function<std::chrono::steady_clock::time_point()>;

  SummaryService(ServiceConfig config,
                 std::shared_ptr<const EmbeddingStack> stack,
                 Clock clock = &std::chrono::steady_clock::now);

  ApiResponse create_document(const std::string& body);
  ApiResponse summarize(const std::string& id, const std::string& body);
  ApiResponse search(const std::string& id, const std::string& body);
  ApiResponse delete_document(const std::string& id);
  ApiResponse health() const;

  std::size_t session_count() const;
  const ServiceConfig& config() const { return config_; }

 private:
  struct Scored {
    std::shared_ptr<const ScoreVector> scores;
    bool cache_hit = false;
  };

  std::shared_ptr<DocumentSession> find_session(const std::string& id);
  void expire_locked(std::chrono::steady_clock::time_point now);
  std::string new_id();
  Scored scores_for(DocumentSession& session, const BiasQuery& query,
                    WindowSpec window, PoolingMode mode);

  ServiceConfig config_;
  std::shared_ptr<const EmbeddingStack> stack_;
  Clock clock_;

  mutable std::mutex mu_;
  std::unordered_map<std::string, std::shared_ptr<DocumentSession>> sessions_;
  std::mt19937_64 rng_;
};

// Binds SummaryService to HTTP routes:
//   POST   /v1/documents
//   POST   /v1/documents/{id}/summary
//   POST   /v1/documents/{id}/search
//   DELETE /v1/documents/{id}
//   GET    /v1/health
class HttpFrontend {
 public:
  explicit HttpFrontend(SummaryService& service);
  ~HttpFrontend();
  HttpFrontend(const HttpFrontend&) = delete;
  HttpFrontend& operator=(const HttpFrontend&) = delete;

  // Port 0 picks a free port. Returns the bound port, or -1 on failure.
  int bind(const std::string& host, int port);
  // Blocks until stop() is called.
  bool listen_after_bind();
  void stop();
  void wait_until_ready() const;

 private:
  SummaryService& service_;
  std::unique_ptr<httplib::Server> server_;
};

// Loads embeddings from the config and serves until the process is stopped.
// Returns 2 if the embeddings cannot be loaded, 1 if binding fails.
int run_service(const ServiceConfig& config);

}  // namespace evsum
