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

#include "evsum/error.hpp"

namespace evsum {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedLine:
      return "MalformedLine";
    case ErrorCode::kInconsistentDimension:
      return "InconsistentDimension";
    case ErrorCode::kUnparsableNumber:
      return "UnparsableNumber";
    case ErrorCode::kEmptyFile:
      return "EmptyFile";
    case ErrorCode::kEmptyInput:
      return "EmptyInput";
    case ErrorCode::kLengthMismatch:
      return "LengthMismatch";
    case ErrorCode::kIndexOutOfRange:
      return "IndexOutOfRange";
    case ErrorCode::kInvalidWindow:
      return "InvalidWindow";
    case ErrorCode::kEmptyQuery:
      return "EmptyQuery";
    case ErrorCode::kEmptyDocument:
      return "EmptyDocument";
    case ErrorCode::kPercentOutOfRange:
      return "PercentOutOfRange";
    case ErrorCode::kUnbiasedQueryNotSearchable:
      return "UnbiasedQueryNotSearchable";
    case ErrorCode::kInvalidArgument:
      return "InvalidArgument";
    case ErrorCode::kIo:
      return "Io";
  }
  return "Unknown";
}

}  // namespace evsum
