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

#include "evsum/embeddings.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>

#include "evsum/error.hpp"
#include "evsum/tokenizer.hpp"

namespace evsum {

namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

void fnv_mix(std::uint64_t& h, const void* data, std::size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= kFnvPrime;
  }
}

bool is_field_space(char c) { return c == ' ' || c == '\t'; }

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && is_field_space(line[pos])) ++pos;
    if (pos == line.size()) break;
    std::size_t end = pos;
    while (end < line.size() && !is_field_space(line[end])) ++end;
    fields.push_back(line.substr(pos, end - pos));
    pos = end;
  }
  return fields;
}

bool parse_size(std::string_view s, std::size_t* out) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), *out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool parse_float(std::string_view s, float* out) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), *out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(*out);
}

bool is_blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(),
                     [](char c) { return is_field_space(c) || c == '\r'; });
}

}  // namespace

std::string_view pooling_name(PoolingMode mode) {
  switch (mode) {
    case PoolingMode::kMean:
      return "mean";
    case PoolingMode::kMax:
      return "max";
    case PoolingMode::kMin:
      return "min";
  }
  return "mean";
}

PoolingMode parse_pooling(std::string_view name) {
  const std::string lower = to_lower(name);
  if (lower == "mean") return PoolingMode::kMean;
  if (lower == "max") return PoolingMode::kMax;
  if (lower == "min") return PoolingMode::kMin;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown pooling mode '" + std::string(name) + "'");
}

class TableBuilder {
 public:
  TableBuilder(std::string name, std::size_t dimension) {
    table_.name_ = std::move(name);
    table_.dimension_ = dimension;
    table_.hash_ = kFnvOffset;
  }

  void add(std::string token, std::span<const float> v) {
    fnv_mix(table_.hash_, token.data(), token.size());
    fnv_mix(table_.hash_, v.data(), v.size_bytes());
    auto [it, inserted] = table_.rows_.try_emplace(token, table_.order_.size());
    if (inserted) {
      table_.order_.push_back(std::move(token));
      table_.data_.insert(table_.data_.end(), v.begin(), v.end());
    } else {
      // Last occurrence wins.
      ++table_.duplicates_;
      std::copy(v.begin(), v.end(),
                table_.data_.begin() + it->second * table_.dimension_);
    }
  }

  std::size_t size() const { return table_.order_.size(); }

  EmbeddingTable finish() && { return std::move(table_); }

 private:
  EmbeddingTable table_;
};

EmbeddingTable EmbeddingTable::from_entries(std::string name,
                                            std::size_t dimension,
                                            std::vector<Entry> entries) {
  if (dimension == 0) {
    throw Error(ErrorCode::kInvalidArgument, "table dimension must be >= 1");
  }
  if (entries.empty()) {
    throw Error(ErrorCode::kEmptyInput, "table has no entries");
  }
  TableBuilder builder(std::move(name), dimension);
  for (auto& [token, vec] : entries) {
    if (token.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "empty token key");
    }
    if (vec.size() != dimension) {
      throw Error(ErrorCode::kInconsistentDimension,
                  "vector for '" + token + "' has " +
                      std::to_string(vec.size()) + " components, expected " +
                      std::to_string(dimension));
    }
    builder.add(std::move(token), vec);
  }
  return std::move(builder).finish();
}

std::optional<std::span<const float>> EmbeddingTable::find(
    std::string_view token) const {
  // Heterogeneous lookup on unordered_map needs C++20 library support that
  // libstdc++ 11 lacks, hence the temporary.
  const auto it = rows_.find(std::string(token));
  if (it == rows_.end()) return std::nullopt;
  return std::span<const float>(data_).subspan(it->second * dimension_,
                                               dimension_);
}

std::vector<std::string> EmbeddingTable::tokens() const { return order_; }

EmbeddingTable load_vectors(std::istream& in, VectorFormat format,
                            std::string name) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t header_dim = 0;
  bool header_seen = false;
  bool first_content = true;
  std::optional<TableBuilder> builder;
  std::vector<float> values;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (is_blank(line)) continue;

    if (first_content) {
      first_content = false;
      if (format != VectorFormat::kGloveText) {
        const auto fields = split_fields(line);
        std::size_t count = 0;
        std::size_t dim = 0;
        const bool header = fields.size() == 2 &&
                            parse_size(fields[0], &count) &&
                            parse_size(fields[1], &dim);
        if (header) {
          if (dim == 0) {
            throw LoadError(ErrorCode::kMalformedLine, line_no,
                            "header declares dimension 0");
          }
          header_seen = true;
          header_dim = dim;
          continue;
        }
        if (format == VectorFormat::kWord2VecText) {
          throw LoadError(ErrorCode::kMalformedLine, line_no,
                          "expected '<count> <dim>' header");
        }
      }
    }

    const std::string_view view = line;
    const std::size_t space = view.find_first_of(" \t");
    if (space == 0) {
      throw LoadError(ErrorCode::kMalformedLine, line_no, "empty token field");
    }
    if (space == std::string_view::npos) {
      throw LoadError(ErrorCode::kMalformedLine, line_no,
                      "line has a token but no vector components");
    }
    const std::string_view token = view.substr(0, space);
    const auto fields = split_fields(view.substr(space + 1));
    if (fields.empty()) {
      throw LoadError(ErrorCode::kMalformedLine, line_no,
                      "line has a token but no vector components");
    }

    if (!builder) {
      if (header_seen && fields.size() != header_dim) {
        throw LoadError(ErrorCode::kInconsistentDimension, line_no,
                        "header declares dimension " +
                            std::to_string(header_dim) + " but line has " +
                            std::to_string(fields.size()));
      }
      builder.emplace(name, fields.size());
      values.resize(fields.size());
    }
    if (fields.size() != values.size()) {
      throw LoadError(ErrorCode::kInconsistentDimension, line_no,
                      "expected " + std::to_string(values.size()) +
                          " components, found " +
                          std::to_string(fields.size()));
    }
    for (std::size_t k = 0; k < fields.size(); ++k) {
      if (!parse_float(fields[k], &values[k])) {
        throw LoadError(ErrorCode::kUnparsableNumber, line_no,
                        "cannot parse '" + std::string(fields[k]) +
                            "' as a number");
      }
    }
    builder->add(std::string(token), values);
  }
  if (in.bad()) {
    throw LoadError(ErrorCode::kIo, line_no, "read failure");
  }
  if (!builder) {
    throw LoadError(ErrorCode::kEmptyFile, line_no, "no vector lines");
  }
  return std::move(*builder).finish();
}

EmbeddingTable load_vectors(const std::filesystem::path& path,
                            VectorFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open " + path.string());
  }
  return load_vectors(in, format, path.filename().string());
}

EmbeddingStack::EmbeddingStack(
    std::vector<std::shared_ptr<const EmbeddingTable>> tables)
    : tables_(std::move(tables)) {
  if (tables_.empty()) {
    throw Error(ErrorCode::kEmptyInput, "embedding stack needs >= 1 table");
  }
  id_ = kFnvOffset;
  for (const auto& t : tables_) {
    if (!t || t->dimension() == 0) {
      throw Error(ErrorCode::kInvalidArgument, "invalid table in stack");
    }
    total_dimension_ += t->dimension();
    const std::uint64_t h = t->content_hash();
    fnv_mix(id_, &h, sizeof h);
  }
}

EmbeddingStack::EmbeddingStack(EmbeddingTable table)
    : EmbeddingStack(std::vector<std::shared_ptr<const EmbeddingTable>>{
          std::make_shared<const EmbeddingTable>(std::move(table))}) {}

std::vector<std::string> EmbeddingStack::names() const {
  std::vector<std::string> out;
  out.reserve(tables_.size());
  for (const auto& t : tables_) out.push_back(t->name());
  return out;
}

std::vector<float> EmbeddingStack::lookup(std::string_view token) const {
  std::vector<float> out(total_dimension_);
  lookup_into(token, out);
  return out;
}

void EmbeddingStack::lookup_into(std::string_view token,
                                 std::span<float> out) const {
  const std::vector<std::string> candidates = lookup_candidates(token);
  std::size_t offset = 0;
  for (const auto& table : tables_) {
    const std::size_t dim = table->dimension();
    std::span<float> slot = out.subspan(offset, dim);
    std::fill(slot.begin(), slot.end(), 0.0f);
    for (const std::string& c : candidates) {
      if (auto hit = table->find(c)) {
        std::copy(hit->begin(), hit->end(), slot.begin());
        break;
      }
    }
    offset += dim;
  }
}

VectorPooler::VectorPooler(std::size_t dimension, PoolingMode mode)
    : mode_(mode), acc_(dimension, 0.0) {}

void VectorPooler::reset() {
  count_ = 0;
  std::fill(acc_.begin(), acc_.end(), 0.0);
}

void VectorPooler::add(std::span<const float> v) {
  if (v.size() != acc_.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "pooling vectors of length " + std::to_string(v.size()) +
                    " and " + std::to_string(acc_.size()));
  }
  const std::size_t n = acc_.size();
  if (count_ == 0 || mode_ == PoolingMode::kMean) {
    if (count_ == 0) {
      for (std::size_t k = 0; k < n; ++k) acc_[k] = v[k];
    } else {
      for (std::size_t k = 0; k < n; ++k) acc_[k] += v[k];
    }
  } else if (mode_ == PoolingMode::kMax) {
    for (std::size_t k = 0; k < n; ++k) acc_[k] = std::max<double>(acc_[k], v[k]);
  } else {
    for (std::size_t k = 0; k < n; ++k) acc_[k] = std::min<double>(acc_[k], v[k]);
  }
  ++count_;
}

void VectorPooler::finish(std::span<double> out) const {
  if (count_ == 0) {
    throw Error(ErrorCode::kEmptyInput, "nothing to pool");
  }
  if (out.size() != acc_.size()) {
    throw Error(ErrorCode::kLengthMismatch, "pool output has wrong length");
  }
  if (mode_ == PoolingMode::kMean) {
    const double denom = static_cast<double>(count_);
    for (std::size_t k = 0; k < acc_.size(); ++k) out[k] = acc_[k] / denom;
  } else {
    std::copy(acc_.begin(), acc_.end(), out.begin());
  }
}

std::vector<double> pool(std::span<const std::vector<float>> vectors,
                         PoolingMode mode) {
  if (vectors.empty()) {
    throw Error(ErrorCode::kEmptyInput, "pool() of an empty list");
  }
  VectorPooler pooler(vectors.front().size(), mode);
  for (const auto& v : vectors) pooler.add(v);
  std::vector<double> out(vectors.front().size());
  pooler.finish(out);
  return out;
}

}  // namespace evsum
