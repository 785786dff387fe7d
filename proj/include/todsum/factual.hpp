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

// State-aware factual consistency: precision/recall/F1 over exactly matched
// (domain, intent, slot, value) tuples, the five-way factual error profile,
// and corpus aggregation.

#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "todsum/error.hpp"
#include "todsum/state.hpp"

namespace todsum {

struct PrfCounts {
  std::size_t n_hyp = 0;
  std::size_t n_tgt = 0;
  std::size_t n_match = 0;
};

struct FactualScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t n_hyp = 0;
  std::size_t n_tgt = 0;
  std::size_t n_match = 0;
};

// Both sides empty scores 1 (nothing asserted, nothing missed); exactly one
// side empty scores 0.
inline FactualScore score_from_counts(const PrfCounts& c) {
  FactualScore s;
  s.n_hyp = c.n_hyp;
  s.n_tgt = c.n_tgt;
  s.n_match = c.n_match;
  if (c.n_hyp == 0 && c.n_tgt == 0) {
    s.precision = s.recall = s.f1 = 1.0;
    return s;
  }
  if (c.n_hyp > 0) s.precision = static_cast<double>(c.n_match) / static_cast<double>(c.n_hyp);
  if (c.n_tgt > 0) s.recall = static_cast<double>(c.n_match) / static_cast<double>(c.n_tgt);
  if (s.precision + s.recall > 0.0) {
    s.f1 = 2.0 * s.precision * s.recall / (s.precision + s.recall);
  }
  return s;
}

// Matching is exact equality of all four fields; both states are expected
// to carry canonical values already.
inline FactualScore factual_prf(const DialogueState& hyp, const DialogueState& tgt) {
  return score_from_counts({hyp.size(), tgt.size(), intersection_size(hyp, tgt)});
}

enum class ErrorType : std::size_t {
  kDomain = 0,
  kIntent,
  kSlotMissing,
  kSlotRedundancy,
  kSlotValue,
};

inline constexpr std::size_t kErrorTypeCount = 5;

inline const char* to_string(ErrorType e) {
  switch (e) {
    case ErrorType::kDomain:
      return "domain_error";
    case ErrorType::kIntent:
      return "intent_error";
    case ErrorType::kSlotMissing:
      return "slot_missing";
    case ErrorType::kSlotRedundancy:
      return "slot_redundancy";
    case ErrorType::kSlotValue:
      return "slot_value_error";
  }
  return "?";
}

struct ErrorProfile {
  std::array<std::size_t, kErrorTypeCount> counts{};

  std::size_t& operator[](ErrorType e) { return counts[static_cast<std::size_t>(e)]; }
  std::size_t operator[](ErrorType e) const {
    return counts[static_cast<std::size_t>(e)];
  }
  std::size_t total() const {
    std::size_t t = 0;
    for (auto c : counts) t += c;
    return t;
  }
  friend bool operator==(const ErrorProfile&, const ErrorProfile&) = default;
};

// Deterministic cascade over unmatched tuples, walked in canonical order:
//   hyp tuple whose domain is absent from tgt              -> domain_error
//   else whose (domain, intent) is absent from tgt         -> intent_error
//   else an unmatched tgt tuple has the same slot key      -> slot_value_error
//        (that tgt tuple is consumed)
//   remaining unmatched hyp tuples                         -> slot_redundancy
//   remaining unmatched tgt tuples                         -> slot_missing
// Hence total() == |hyp \ tgt| + |tgt \ hyp| - slot_value_error.
inline ErrorProfile classify_errors(const DialogueState& hyp, const DialogueState& tgt) {
  ErrorProfile p;
  const auto tgt_domains = tgt.domains();
  const auto tgt_intents = tgt.domain_intents();
  DialogueState missing = set_difference(tgt, hyp);
  for (const StateTuple& h : hyp) {
    if (tgt.contains(h)) continue;
    if (tgt_domains.count(h.domain) == 0) {
      ++p[ErrorType::kDomain];
    } else if (tgt_intents.count({h.domain, h.intent}) == 0) {
      ++p[ErrorType::kIntent];
    } else {
      const StateTuple* counterpart = nullptr;
      for (const StateTuple& t : missing) {
        if (t.same_slot_key(h)) {
          counterpart = &t;
          break;
        }
      }
      if (counterpart != nullptr) {
        ++p[ErrorType::kSlotValue];
        missing.erase(StateTuple(*counterpart));
      } else {
        ++p[ErrorType::kSlotRedundancy];
      }
    }
  }
  p[ErrorType::kSlotMissing] = missing.size();
  return p;
}

struct SampleScore {
  FactualScore score;
  ErrorProfile errors;
};

struct FactualReport {
  std::size_t samples = 0;
  FactualScore micro;  // from summed counts
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
  std::array<std::size_t, kErrorTypeCount> error_totals{};
  std::array<double, kErrorTypeCount> error_means{};  // per sample
};

// Summing in sorted order makes floating-point means independent of sample
// order.
inline double sorted_sum(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  double total = 0.0;
  for (double v : values) total += v;
  return total;
}

inline FactualReport aggregate_report(const std::vector<SampleScore>& per_sample) {
  if (per_sample.empty()) throw Error("aggregate: no samples");
  FactualReport r;
  r.samples = per_sample.size();
  PrfCounts sum;
  std::vector<double> p, rc, f;
  for (const auto& s : per_sample) {
    sum.n_hyp += s.score.n_hyp;
    sum.n_tgt += s.score.n_tgt;
    sum.n_match += s.score.n_match;
    p.push_back(s.score.precision);
    rc.push_back(s.score.recall);
    f.push_back(s.score.f1);
    for (std::size_t k = 0; k < kErrorTypeCount; ++k) r.error_totals[k] += s.errors.counts[k];
  }
  const double n = static_cast<double>(r.samples);
  r.micro = score_from_counts(sum);
  r.macro_precision = sorted_sum(std::move(p)) / n;
  r.macro_recall = sorted_sum(std::move(rc)) / n;
  r.macro_f1 = sorted_sum(std::move(f)) / n;
  for (std::size_t k = 0; k < kErrorTypeCount; ++k) {
    r.error_means[k] = static_cast<double>(r.error_totals[k]) / n;
  }
  return r;
}

inline nlohmann::json to_json(const FactualScore& s) {
  return {{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1},
          {"n_hyp", s.n_hyp},         {"n_tgt", s.n_tgt},   {"n_match", s.n_match}};
}

inline nlohmann::json to_json(const ErrorProfile& e) {
  nlohmann::json j = nlohmann::json::object();
  for (std::size_t k = 0; k < kErrorTypeCount; ++k) {
    j[to_string(static_cast<ErrorType>(k))] = e.counts[k];
  }
  return j;
}

}  // namespace todsum
