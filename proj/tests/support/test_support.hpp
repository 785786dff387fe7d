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

// Shared helpers for the test binaries: fixture paths, a random state
// generator over an ontology, and slow reference implementations.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "todsum/corpus.hpp"
#include "todsum/ontology.hpp"
#include "todsum/state.hpp"

namespace todsum::testing {

inline std::string data_path(const std::string& name) {
  return std::string(TODSUM_TEST_DATA_DIR) + "/" + name;
}

inline const Ontology& fixture_ontology() {
  static const Ontology ontology = load_ontology(data_path("ontology.json"));
  return ontology;
}

// Open values that do not collide with any cue or closed value.
inline const std::vector<std::string>& open_value_pool(const std::string& slot) {
  static const std::vector<std::string> names = {
      "acorn guest house", "gonville hotel", "allenbell", "the golden curry",
      "pizza hut city centre", "kings college", "byard art", "da vinci pizzeria"};
  static const std::vector<std::string> times = {"17:30", "09:15", "12:00", "20:45", "06:05"};
  if (slot == "leave_at" || slot == "arrive_by" || slot == "time") return times;
  return names;
}

class StateGenerator {
 public:
  StateGenerator(const Ontology& ontology, std::uint64_t seed)
      : ontology_(ontology), engine_(seed) {}

  std::size_t index(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
  }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(engine_); }
  std::mt19937_64& engine() { return engine_; }

  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[index(v.size())];
  }

  std::string random_value(const std::string& domain, const std::string& slot) {
    const SlotSchema& s = *ontology_.find_slot(domain, slot);
    return s.open ? pick(open_value_pool(slot)) : pick(s.values);
  }

  // 1..max_domains domains, each with one or more intents holding 1..5 slots.
  DialogueState random_state(std::size_t max_domains = 3) {
    std::vector<std::string> names;
    for (const auto& [name, d] : ontology_.domains()) names.push_back(name);
    std::shuffle(names.begin(), names.end(), engine_);
    const std::size_t k = 1 + index(std::min(max_domains, names.size()));
    DialogueState state;
    for (std::size_t i = 0; i < k; ++i) {
      const DomainSchema& d = *ontology_.find_domain(names[i]);
      std::vector<const IntentSchema*> intents;
      for (const auto& [iname, intent] : d.intents) intents.push_back(&intent);
      std::shuffle(intents.begin(), intents.end(), engine_);
      const std::size_t ki = 1 + index(intents.size());
      for (std::size_t j = 0; j < ki; ++j) {
        std::vector<std::string> slots = intents[j]->slots;
        std::shuffle(slots.begin(), slots.end(), engine_);
        const std::size_t ks = 1 + index(std::min<std::size_t>(5, slots.size()));
        for (std::size_t s = 0; s < ks; ++s) {
          state.insert({d.name, intents[j]->name, slots[s], random_value(d.name, slots[s])});
        }
      }
    }
    return state;
  }

  // Any legal tuple, possibly one already in some state.
  StateTuple random_tuple() {
    std::vector<StateTuple> all;
    for (const auto& [dname, d] : ontology_.domains()) {
      for (const auto& [iname, intent] : d.intents) {
        for (const auto& slot : intent.slots) all.push_back({dname, iname, slot, ""});
      }
    }
    StateTuple t = pick(all);
    t.value = random_value(t.domain, t.slot);
    return t;
  }

  // A state sharing a random part of `base`, plus fresh tuples.
  DialogueState perturbed(const DialogueState& base, std::size_t extra_max = 4) {
    DialogueState out;
    for (const auto& t : base) {
      if (coin(0.6)) out.insert(t);
    }
    const std::size_t extra = index(extra_max + 1);
    for (std::size_t i = 0; i < extra; ++i) out.insert(random_tuple());
    return out;
  }

  std::vector<std::string> random_tokens(std::size_t max_len, std::size_t vocab) {
    static const std::vector<std::string> words = {"the", "cat", "sat", "on", "a", "mat",
                                                   "dog", "ran", "to", "hotel"};
    std::vector<std::string> out(index(max_len + 1));
    for (auto& w : out) w = words[index(std::min(vocab, words.size()))];
    return out;
  }

  // Utterances of 3..12 words over a small vocabulary, so bigrams recur.
  Dialogue random_dialogue(const std::string& id, std::size_t max_turns) {
    static const std::vector<std::string> words = {
        "i", "need", "a", "cheap", "hotel", "in", "the", "north", "for", "two",
        "people", "please", "book", "it", "taxi", "to", "station", "thanks"};
    auto sentence = [&] {
      std::vector<std::string> w(3 + index(10));
      for (auto& x : w) x = pick(words);
      std::string out;
      for (const auto& x : w) out += (out.empty() ? "" : " ") + x;
      return out + ".";
    };
    Dialogue d;
    d.id = id;
    const std::size_t turns = 1 + index(max_turns);
    for (std::size_t i = 0; i < turns; ++i) {
      d.turns.push_back({i % 2 == 0 ? Speaker::kUser : Speaker::kSystem, sentence()});
    }
    d.summary = sentence() + " " + sentence();
    return d;
  }

 private:
  const Ontology& ontology_;
  std::mt19937_64 engine_;
};

namespace oracle {

// Longest common subsequence by enumerating every subsequence of `a`.
inline std::size_t brute_lcs(const std::vector<std::string>& a,
                             const std::vector<std::string>& b) {
  std::size_t best = 0;
  const std::size_t n = a.size();
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::vector<std::string> sub;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) sub.push_back(a[i]);
    }
    if (sub.size() <= best) continue;
    std::size_t j = 0;
    for (std::size_t i = 0; i < b.size() && j < sub.size(); ++i) {
      if (b[i] == sub[j]) ++j;
    }
    if (j == sub.size()) best = sub.size();
  }
  return best;
}

inline std::vector<std::vector<std::string>> ngrams(const std::vector<std::string>& t,
                                                    std::size_t n) {
  std::vector<std::vector<std::string>> out;
  for (std::size_t i = 0; i + n <= t.size(); ++i) {
    out.emplace_back(t.begin() + static_cast<std::ptrdiff_t>(i),
                     t.begin() + static_cast<std::ptrdiff_t>(i + n));
  }
  return out;
}

// Sum over distinct hypothesis n-grams of min(count in hyp, count in ref).
inline std::size_t clipped_overlap(const std::vector<std::string>& hyp,
                                   const std::vector<std::string>& ref, std::size_t n) {
  const auto h = ngrams(hyp, n);
  const auto r = ngrams(ref, n);
  std::size_t total = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    bool first = true;
    for (std::size_t k = 0; k < i; ++k) {
      if (h[k] == h[i]) first = false;
    }
    if (!first) continue;
    const auto ch = static_cast<std::size_t>(std::count(h.begin(), h.end(), h[i]));
    const auto cr = static_cast<std::size_t>(std::count(r.begin(), r.end(), h[i]));
    total += std::min(ch, cr);
  }
  return total;
}

struct Prf {
  double p, r, f;
};

// Reference scores from sizes, with both-empty = 1 and one-side-empty = 0.
inline Prf prf(std::size_t matched, std::size_t n_hyp, std::size_t n_ref) {
  if (n_hyp == 0 && n_ref == 0) return {1.0, 1.0, 1.0};
  if (n_hyp == 0 || n_ref == 0) return {0.0, 0.0, 0.0};
  const double p = static_cast<double>(matched) / static_cast<double>(n_hyp);
  const double r = static_cast<double>(matched) / static_cast<double>(n_ref);
  return {p, r, p + r > 0 ? 2 * p * r / (p + r) : 0.0};
}

inline std::size_t common_tuples(const DialogueState& a, const DialogueState& b) {
  std::size_t n = 0;
  for (const auto& x : a) {
    for (const auto& y : b) {
      if (x.domain == y.domain && x.intent == y.intent && x.slot == y.slot && x.value == y.value) ++n;
    }
  }
  return n;
}

}  // namespace oracle
}  // namespace todsum::testing
