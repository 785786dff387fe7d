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

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "todsum/porter_stemmer.hpp"
#include "todsum/text.hpp"

namespace todsum {

struct TokenizerOptions {
  bool lowercase = true;
  // Strip leading/trailing ASCII punctuation from every token. Intra-token
  // punctuation such as "4-star" or "17:30" is never touched.
  bool strip_punctuation = true;
  bool fold_number_words = false;
  bool stem = false;

  friend bool operator==(const TokenizerOptions&,
                         const TokenizerOptions&) = default;
};

// Canonical whitespace tokenizer used for ROUGE, corpus statistics and the
// extractive baselines.
class Tokenizer {
 public:
  Tokenizer() = default;
  explicit Tokenizer(TokenizerOptions options) : options_(options) {}

  const TokenizerOptions& options() const noexcept { return options_; }

  std::vector<std::string> operator()(std::string_view input) const {
    std::vector<std::string> tokens;
    std::string normalized =
        options_.lowercase ? text::to_lower(input) : std::string(input);
    for (std::string& raw : text::split_whitespace(normalized)) {
      std::string_view tok = raw;
      if (options_.strip_punctuation) {
        while (!tok.empty() && text::is_ascii_punct(tok.front()))
          tok.remove_prefix(1);
        while (!tok.empty() && text::is_ascii_punct(tok.back()))
          tok.remove_suffix(1);
      }
      if (tok.empty()) continue;
      std::string out = options_.fold_number_words
                            ? text::fold_number_words_in_token(tok)
                            : std::string(tok);
      if (options_.stem) out = stemmer_(out);
      tokens.push_back(std::move(out));
    }
    return tokens;
  }

 private:
  TokenizerOptions options_;
  PorterStemmer stemmer_;
};

inline std::vector<std::string> tokenize(std::string_view input) {
  return Tokenizer{}(input);
}

}  // namespace todsum
