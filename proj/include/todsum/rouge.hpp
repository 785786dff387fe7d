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

// ROUGE-1/2 with clipped n-gram counts and sentence-level ROUGE-L.
//
// Empty-side conventions (shared with the factual metric): when both sides
// have no units (n-grams or tokens) P = R = F = 1; when exactly one side is
// empty all three are 0.

#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace todsum {

enum class RougeVariant { kRouge1, kRouge2, kRougeL };

inline const char* to_string(RougeVariant v) {
  switch (v) {
    case RougeVariant::kRouge1:
      return "rouge1";
    case RougeVariant::kRouge2:
      return "rouge2";
    case RougeVariant::kRougeL:
      return "rougeL";
  }
  return "?";
}

struct RougeScore {
  RougeVariant variant = RougeVariant::kRouge1;
  double precision = 0.0;
  double recall = 0.0;
  double f = 0.0;
  std::size_t overlap = 0;    // clipped n-gram matches or LCS length
  std::size_t hyp_units = 0;  // hypothesis n-grams or tokens
  std::size_t ref_units = 0;
};

// Precision/recall/F from an overlap count; applies the empty-side rules.
inline RougeScore make_overlap_score(RougeVariant variant, std::size_t overlap,
                                     std::size_t hyp_units,
                                     std::size_t ref_units) {
  RougeScore s;
  s.variant = variant;
  s.overlap = overlap;
  s.hyp_units = hyp_units;
  s.ref_units = ref_units;
  if (hyp_units == 0 && ref_units == 0) {
    s.precision = s.recall = s.f = 1.0;
    return s;
  }
  if (hyp_units == 0 || ref_units == 0) return s;
  s.precision = static_cast<double>(overlap) / static_cast<double>(hyp_units);
  s.recall = static_cast<double>(overlap) / static_cast<double>(ref_units);
  s.f = s.precision + s.recall > 0.0
            ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
            : 0.0;
  return s;
}

namespace detail {

inline std::map<std::vector<std::string>, std::size_t> ngram_counts(
    std::span<const std::string> tokens, std::size_t n) {
  std::map<std::vector<std::string>, std::size_t> counts;
  if (tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    ++counts[std::vector<std::string>(tokens.begin() + i,
                                      tokens.begin() + i + n)];
  }
  return counts;
}

inline std::size_t ngram_total(std::size_t len, std::size_t n) {
  return len >= n ? len - n + 1 : 0;
}

}  // namespace detail

inline RougeScore rouge_n(std::span<const std::string> hyp,
                          std::span<const std::string> ref, int n) {
  if (n != 1 && n != 2) throw std::invalid_argument("rouge_n: n must be 1 or 2");
  const auto un = static_cast<std::size_t>(n);
  auto hyp_counts = detail::ngram_counts(hyp, un);
  auto ref_counts = detail::ngram_counts(ref, un);
  std::size_t overlap = 0;
  for (const auto& [gram, count] : hyp_counts) {
    auto it = ref_counts.find(gram);
    if (it != ref_counts.end()) overlap += std::min(count, it->second);
  }
  return make_overlap_score(
      n == 1 ? RougeVariant::kRouge1 : RougeVariant::kRouge2, overlap,
      detail::ngram_total(hyp.size(), un), detail::ngram_total(ref.size(), un));
}

// Length of the longest common subsequence; O(min(|a|, |b|)) memory.
inline std::size_t lcs_length(std::span<const std::string> a,
                              std::span<const std::string> b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1, 0);
  for (const auto& x : a) {
    std::size_t diag = 0;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t up = row[j];
      row[j] = x == b[j - 1] ? diag + 1 : std::max(row[j], row[j - 1]);
      diag = up;
    }
  }
  return row[b.size()];
}

inline RougeScore rouge_l(std::span<const std::string> hyp,
                          std::span<const std::string> ref) {
  return make_overlap_score(RougeVariant::kRougeL, lcs_length(hyp, ref),
                            hyp.size(), ref.size());
}

struct RougeTriple {
  RougeScore r1{RougeVariant::kRouge1};
  RougeScore r2{RougeVariant::kRouge2};
  RougeScore rl{RougeVariant::kRougeL};
};

inline RougeTriple rouge_all(std::span<const std::string> hyp,
                             std::span<const std::string> ref) {
  return {rouge_n(hyp, ref, 1), rouge_n(hyp, ref, 2), rouge_l(hyp, ref)};
}

}  // namespace todsum
