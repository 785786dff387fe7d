// Copyright 2026 The TODSum Toolkit Authors.
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

// Small ASCII string helpers shared by the tokenizer, ontology and extractor.
// Bytes outside the ASCII range are passed through untouched, so UTF-8 text
// survives every transformation here.

#pragma once

#include <array>
#include <cctype>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace todsum::text {

inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

inline bool is_ascii_punct(char c) {
  auto u = static_cast<unsigned char>(c);
  return u < 128 && std::ispunct(u) != 0;
}

inline std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

inline std::string_view trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return s.substr(b, e - b);
}

inline bool is_blank(std::string_view s) { return trim(s).empty(); }

inline std::vector<std::string> split_whitespace(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    std::size_t j = i;
    while (j < s.size() && !is_space(s[j])) ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::string join(const std::vector<std::string>& parts,
                        std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += sep;
    out += parts[i];
  }
  return out;
}

// Trims and replaces every internal whitespace run by a single space.
inline std::string collapse_whitespace(std::string_view s) {
  return join(split_whitespace(s), " ");
}

inline bool contains(std::string_view haystack, std::string_view needle) {
  return haystack.find(needle) != std::string_view::npos;
}

inline const std::array<std::string_view, 21>& number_words() {
  static const std::array<std::string_view, 21> kWords = {
      "zero",    "one",     "two",       "three",    "four",
      "five",    "six",     "seven",     "eight",    "nine",
      "ten",     "eleven",  "twelve",    "thirteen", "fourteen",
      "fifteen", "sixteen", "seventeen", "eighteen", "nineteen",
      "twenty"};
  return kWords;
}

// "four" -> "4" for zero through twenty; anything else is returned as is.
inline std::string fold_number_word(std::string_view word) {
  const auto& words = number_words();
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (word == words[i]) return std::to_string(i);
  }
  return std::string(word);
}

// Folds number words inside a token, including hyphenated parts, so that
// "four-star" becomes "4-star".
inline std::string fold_number_words_in_token(std::string_view token) {
  std::string out;
  std::size_t start = 0;
  while (true) {
    std::size_t dash = token.find('-', start);
    std::string_view part = token.substr(
        start, dash == std::string_view::npos ? std::string_view::npos
                                              : dash - start);
    out += fold_number_word(part);
    if (dash == std::string_view::npos) break;
    out += '-';
    start = dash + 1;
  }
  return out;
}

inline bool is_all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

}  // namespace todsum::text
