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

#include "evsum/tokenizer.hpp"

#include <algorithm>
#include <iterator>
#include <utility>

#include "utf8.hpp"

namespace evsum {

namespace {

struct Range {
  char32_t lo;
  char32_t hi;
};

// Unicode general category P* ranges for Latin, Greek, Cyrillic, general
// and CJK punctuation blocks.
constexpr Range kPunctuation[] = {
    {0x00A1, 0x00A1}, {0x00A7, 0x00A7}, {0x00AB, 0x00AB}, {0x00B6, 0x00B7},
    {0x00BB, 0x00BB}, {0x00BF, 0x00BF}, {0x037E, 0x037E}, {0x0387, 0x0387},
    {0x055A, 0x055F}, {0x0589, 0x058A}, {0x05BE, 0x05BE}, {0x05C0, 0x05C0},
    {0x05C3, 0x05C3}, {0x05C6, 0x05C6}, {0x05F3, 0x05F4}, {0x060C, 0x060D},
    {0x061B, 0x061B}, {0x061E, 0x061F}, {0x066A, 0x066D}, {0x06D4, 0x06D4},
    {0x0964, 0x0965}, {0x0970, 0x0970}, {0x0E4F, 0x0E4F}, {0x0E5A, 0x0E5B},
    {0x2010, 0x2027}, {0x2030, 0x2043}, {0x2045, 0x2051}, {0x2053, 0x205E},
    {0x207D, 0x207E}, {0x208D, 0x208E}, {0x2308, 0x230B}, {0x2329, 0x232A},
    {0x2768, 0x2775}, {0x27C5, 0x27C6}, {0x27E6, 0x27EF}, {0x2983, 0x2998},
    {0x29D8, 0x29DB}, {0x29FC, 0x29FD}, {0x2CF9, 0x2CFC}, {0x2CFE, 0x2CFF},
    {0x2E00, 0x2E4F}, {0x3001, 0x3003}, {0x3008, 0x3011}, {0x3014, 0x301F},
    {0x3030, 0x3030}, {0x303D, 0x303D}, {0x30A0, 0x30A0}, {0x30FB, 0x30FB},
    {0xFE10, 0xFE19}, {0xFE30, 0xFE52}, {0xFE54, 0xFE61}, {0xFE63, 0xFE63},
    {0xFE68, 0xFE68}, {0xFE6A, 0xFE6B}, {0xFF01, 0xFF03}, {0xFF05, 0xFF0A},
    {0xFF0C, 0xFF0F}, {0xFF1A, 0xFF1B}, {0xFF1F, 0xFF20}, {0xFF3B, 0xFF3D},
    {0xFF3F, 0xFF3F}, {0xFF5B, 0xFF5B}, {0xFF5D, 0xFF5D}, {0xFF5F, 0xFF65},
    {0x0021, 0x002F}, {0x003A, 0x0040}, {0x005B, 0x0060}, {0x007B, 0x007E},
};

char32_t lower_cp(char32_t cp) {
  if (cp < 0x80) return (cp >= 'A' && cp <= 'Z') ? cp + 32 : cp;
  if (cp >= 0x00C0 && cp <= 0x00DE && cp != 0x00D7) return cp + 32;
  if (cp == 0x0130) return U'i';
  if (cp == 0x0178) return 0x00FF;
  if ((cp >= 0x0100 && cp <= 0x0137) || (cp >= 0x014A && cp <= 0x0177)) {
    return (cp % 2 == 0) ? cp + 1 : cp;
  }
  if ((cp >= 0x0139 && cp <= 0x0148) || (cp >= 0x0179 && cp <= 0x017E)) {
    return (cp % 2 == 1) ? cp + 1 : cp;
  }
  if ((cp >= 0x0391 && cp <= 0x03A1) || (cp >= 0x03A3 && cp <= 0x03AB)) {
    return cp + 32;
  }
  if (cp == 0x0386) return 0x03AC;
  if (cp >= 0x0388 && cp <= 0x038A) return cp + 37;
  if (cp == 0x038C) return 0x03CC;
  if (cp >= 0x038E && cp <= 0x038F) return cp + 63;
  if (cp >= 0x0410 && cp <= 0x042F) return cp + 32;
  if (cp >= 0x0400 && cp <= 0x040F) return cp + 80;
  return cp;
}

bool punct_at(std::string_view s, std::size_t pos, std::size_t* len) {
  const utf8::Decoded d = utf8::decode(s, pos);
  *len = d.length;
  return d.valid && is_unicode_punctuation(d.cp);
}

}  // namespace

bool is_unicode_whitespace(char32_t cp) {
  return (cp >= 0x0009 && cp <= 0x000D) || cp == 0x0020 || cp == 0x0085 ||
         cp == 0x00A0 || cp == 0x1680 || (cp >= 0x2000 && cp <= 0x200A) ||
         cp == 0x2028 || cp == 0x2029 || cp == 0x202F || cp == 0x205F ||
         cp == 0x3000;
}

bool is_unicode_punctuation(char32_t cp) {
  return std::any_of(std::begin(kPunctuation), std::end(kPunctuation),
                     [cp](const Range& r) { return cp >= r.lo && cp <= r.hi; });
}

TokenizedDocument tokenize(std::string source) {
  TokenizedDocument doc;
  doc.source = std::move(source);
  const std::string_view s = doc.source;

  std::size_t pos = 0;
  std::size_t start = 0;
  bool in_token = false;
  while (pos < s.size()) {
    const utf8::Decoded d = utf8::decode(s, pos);
    const bool space = d.valid && is_unicode_whitespace(d.cp);
    if (space && in_token) {
      doc.tokens.push_back({std::string(s.substr(start, pos - start)), start,
                            pos, doc.tokens.size()});
      in_token = false;
    } else if (!space && !in_token) {
      start = pos;
      in_token = true;
    }
    pos += d.length;
  }
  if (in_token) {
    doc.tokens.push_back({std::string(s.substr(start)), start, s.size(),
                          doc.tokens.size()});
  }
  return doc;
}

std::string to_lower(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) {
    const utf8::Decoded d = utf8::decode(text, pos);
    if (d.valid) {
      utf8::append(out, lower_cp(d.cp));
    } else {
      out.push_back(text[pos]);
    }
    pos += d.length;
  }
  return out;
}

std::string strip_punctuation(std::string_view text) {
  std::size_t begin = 0;
  std::size_t len = 0;
  while (begin < text.size() && punct_at(text, begin, &len)) begin += len;

  // Walk forward so multi-byte sequences are decoded from their lead byte.
  std::size_t end = begin;
  std::size_t pos = begin;
  while (pos < text.size()) {
    const bool p = punct_at(text, pos, &len);
    pos += len;
    if (!p) end = pos;
  }
  return std::string(text.substr(begin, end - begin));
}

std::vector<std::string> lookup_candidates(std::string_view text) {
  const std::string stripped = strip_punctuation(text);
  std::string chain[] = {std::string(text), to_lower(text), stripped,
                         to_lower(stripped)};
  std::vector<std::string> out;
  for (std::string& c : chain) {
    if (c.empty()) continue;
    if (std::find(out.begin(), out.end(), c) != out.end()) continue;
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace evsum
