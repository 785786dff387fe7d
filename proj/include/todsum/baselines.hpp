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

// Non-neural extractive baselines: Lead-k and the greedy ROUGE-2 oracle.

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "todsum/corpus.hpp"
#include "todsum/error.hpp"
#include "todsum/rouge.hpp"
#include "todsum/text.hpp"
#include "todsum/tokenizer.hpp"

namespace todsum {

struct ExtractiveSummary {
  std::vector<std::size_t> selected;  // strictly increasing utterance indices
  std::string text;                   // selected utterances, space-joined
  double score = 0.0;                 // oracle only: final ROUGE-2 F
  std::vector<double> trace;          // oracle only: score after each step
};

namespace detail {

inline std::string join_utterances(const Dialogue& d,
                                   const std::vector<std::size_t>& indices) {
  std::vector<std::string> parts;
  for (std::size_t i : indices) parts.push_back(d.turns[i].text);
  return text::join(parts, " ");
}

}  // namespace detail

inline ExtractiveSummary lead_k(const Dialogue& d, std::size_t k = 3) {
  if (k == 0) throw Error("lead_k: k must be at least 1");
  ExtractiveSummary out;
  for (std::size_t i = 0; i < std::min(k, d.turns.size()); ++i) out.selected.push_back(i);
  out.text = detail::join_utterances(d, out.selected);
  return out;
}

// Greedily adds the utterance that most improves ROUGE-2 F of the selection
// (taken in dialogue order) against the reference, stopping when no
// addition strictly improves it. Ties go to the lowest index. The empty
// selection scores 0.
inline ExtractiveSummary greedy_oracle(const Dialogue& d, std::string_view reference,
                                       const Tokenizer& tokenizer = Tokenizer{}) {
  if (text::is_blank(reference)) throw Error("greedy_oracle: empty reference");
  const std::vector<std::string> ref = tokenizer(reference);
  std::vector<std::vector<std::string>> utterances;
  utterances.reserve(d.turns.size());
  for (const auto& u : d.turns) utterances.push_back(tokenizer(u.text));

  std::vector<char> chosen(d.turns.size(), 0);
  ExtractiveSummary out;
  auto score_with = [&](std::size_t extra) {
    std::vector<std::string> hyp;
    for (std::size_t i = 0; i < utterances.size(); ++i) {
      if (chosen[i] || i == extra) hyp.insert(hyp.end(), utterances[i].begin(), utterances[i].end());
    }
    return rouge_n(hyp, ref, 2).f;
  };
  while (true) {
    double best = out.score;
    std::size_t best_index = d.turns.size();
    for (std::size_t i = 0; i < d.turns.size(); ++i) {
      if (chosen[i]) continue;
      double s = score_with(i);
      if (s > best) {
        best = s;
        best_index = i;
      }
    }
    if (best_index == d.turns.size()) break;
    chosen[best_index] = 1;
    out.score = best;
    out.trace.push_back(best);
  }
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    if (chosen[i]) out.selected.push_back(i);
  }
  out.text = detail::join_utterances(d, out.selected);
  return out;
}

}  // namespace todsum
