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
#include <stdexcept>
#include <string>
#include <string_view>

namespace evsum {

enum class ErrorCode {
  kMalformedLine,
  kInconsistentDimension,
  kUnparsableNumber,
  kEmptyFile,
  kEmptyInput,
  kLengthMismatch,
  kIndexOutOfRange,
  kInvalidWindow,
  kEmptyQuery,
  kEmptyDocument,
  kPercentOutOfRange,
  kUnbiasedQueryNotSearchable,
  kInvalidArgument,
  kIo,
};

// Stable name used in diagnostics and service error bodies.
std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Raised while parsing a vector file. line() is 1-based; 0 means the error
// is not tied to a particular line (e.g. an empty file).
class LoadError : public Error {
 public:
  LoadError(ErrorCode code, std::size_t line, const std::string& message)
      : Error(code, "line " + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace evsum
