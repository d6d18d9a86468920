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
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace evsum {

enum class VectorFormat { kAuto, kWord2VecText, kGloveText };

enum class PoolingMode { kMean, kMax, kMin };

std::string_view pooling_name(PoolingMode mode);
// Accepts "mean", "max", "min" (case-insensitive). Throws kInvalidArgument.
PoolingMode parse_pooling(std::string_view name);

// Token -> float32 vector table. Immutable once built.
class EmbeddingTable {
 public:
  using Entry = std::pair<std::string, std::vector<float>>;

  // Validates the table invariants (dimension >= 1, at least one entry,
  // non-empty tokens, every vector of length `dimension`). A repeated token
  // replaces the earlier vector and bumps duplicate_count().
  static EmbeddingTable from_entries(std::string name, std::size_t dimension,
                                     std::vector<Entry> entries);

  const std::string& name() const { return name_; }
  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return rows_.size(); }
  std::size_t duplicate_count() const { return duplicates_; }
  // FNV-1a over tokens and vector bytes in insertion order.
  std::uint64_t content_hash() const { return hash_; }

  std::optional<std::span<const float>> find(std::string_view token) const;

  // Entries in first-insertion order.
  std::vector<std::string> tokens() const;

 private:
  friend class TableBuilder;
  EmbeddingTable() = default;

  std::string name_;
  std::size_t dimension_ = 0;
  std::size_t duplicates_ = 0;
  std::uint64_t hash_ = 0;
  std::vector<std::string> order_;
  std::unordered_map<std::string, std::size_t> rows_;
  std::vector<float> data_;
};

// Parses GloVe text ("token v1 ... vd" per line) or word2vec text (same,
// after a "count dim" header line). Blank lines are skipped. Throws
// LoadError carrying the 1-based offending line.
EmbeddingTable load_vectors(std::istream& in, VectorFormat format,
                            std::string name);
EmbeddingTable load_vectors(const std::filesystem::path& path,
                            VectorFormat format = VectorFormat::kAuto);

// Ordered stack of tables whose vectors are concatenated per token.
class EmbeddingStack {
 public:
  explicit EmbeddingStack(std::vector<std::shared_ptr<const EmbeddingTable>> tables);
  explicit EmbeddingStack(EmbeddingTable table);

  std::size_t total_dimension() const { return total_dimension_; }
  std::span<const std::shared_ptr<const EmbeddingTable>> tables() const {
    return tables_;
  }
  // Combines member content hashes; equal stacks share an id.
  std::uint64_t id() const { return id_; }
  std::vector<std::string> names() const;

  // Each table resolves independently through lookup_candidates(); a table
  // with no hit contributes zeros. Never throws.
  std::vector<float> lookup(std::string_view token) const;
  void lookup_into(std::string_view token, std::span<float> out) const;

 private:
  std::vector<std::shared_ptr<const EmbeddingTable>> tables_;
  std::size_t total_dimension_ = 0;
  std::uint64_t id_ = 0;
};

// Streaming reducer shared by pool() and the window scorer so both use the
// same arithmetic. Accumulates in double.
class VectorPooler {
 public:
  VectorPooler(std::size_t dimension, PoolingMode mode);

  void reset();
  void add(std::span<const float> v);
  std::size_t count() const { return count_; }
  // Writes the pooled vector; requires count() >= 1.
  void finish(std::span<double> out) const;

 private:
  PoolingMode mode_;
  std::size_t count_ = 0;
  std::vector<double> acc_;
};

// Throws kEmptyInput or kLengthMismatch.
std::vector<double> pool(std::span<const std::vector<float>> vectors,
                         PoolingMode mode);

}  // namespace evsum
