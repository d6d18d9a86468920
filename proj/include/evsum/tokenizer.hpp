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
#include <string>
#include <string_view>
#include <vector>

namespace evsum {

// A whitespace-delimited word and its byte span in the source text.
struct Token {
  std::string text;
  std::size_t byte_start = 0;
  std::size_t byte_end = 0;  // exclusive
  std::size_t index = 0;

  bool operator==(const Token&) const = default;
};

struct TokenizedDocument {
  std::string source;
  std::vector<Token> tokens;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
};

// Splits on Unicode whitespace. Tokens are maximal non-whitespace runs, so
// punctuation stays attached and spans always index the original bytes.
// Invalid UTF-8 bytes are treated as non-whitespace.
TokenizedDocument tokenize(std::string source);

// Lowercases ASCII, Latin-1, Latin Extended-A, Greek and Cyrillic letters.
// Everything else passes through unchanged.
std::string to_lower(std::string_view text);

// Removes leading and trailing punctuation code points.
std::string strip_punctuation(std::string_view text);

bool is_unicode_whitespace(char32_t cp);
bool is_unicode_punctuation(char32_t cp);

// Ordered lookup fallback chain:
//   text, lower(text), strip(text), lower(strip(text))
// Empty candidates are dropped and each string appears once, at its first
// position.
std::vector<std::string> lookup_candidates(std::string_view text);
inline std::vector<std::string> lookup_candidates(const Token& token) {
  return lookup_candidates(token.text);
}

}  // namespace evsum
