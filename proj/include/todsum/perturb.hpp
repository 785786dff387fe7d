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

// Dataset variants: seeded tuple-level noise on dialogue states and
// single-domain adaptation splits.
//
// All randomness comes from std::mt19937_64, whose output sequence is fixed
// by the C++ standard, combined with the hand-written sampling below (the
// standard distributions are implementation-defined), so outputs are
// byte-identical across platforms and standard libraries.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "todsum/corpus.hpp"
#include "todsum/error.hpp"
#include "todsum/ontology.hpp"
#include "todsum/state.hpp"

namespace todsum {

class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, n), by rejection of the biased low range.
  std::size_t uniform_index(std::size_t n) {
    if (n == 0) throw std::invalid_argument("uniform_index: empty range");
    const std::uint64_t range = n;
    const std::uint64_t threshold = (0 - range) % range;
    std::uint64_t r = engine_();
    while (r < threshold) r = engine_();
    return static_cast<std::size_t>(r % range);
  }

  // Uniform in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

// 64-bit FNV-1a; stable across platforms.
inline std::uint64_t stable_hash(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Per-dialogue seed, so processing order never changes the output.
inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view dialogue_id) {
  return seed ^ stable_hash(dialogue_id);
}

// |noisy ∩ gold| / max(|noisy|, |gold|); 1 when both are empty. Inserted
// tuples grow the denominator, so every edit type lowers accuracy.
inline double tuple_accuracy(const DialogueState& noisy, const DialogueState& gold) {
  const std::size_t denom = std::max(noisy.size(), gold.size());
  if (denom == 0) return 1.0;
  return static_cast<double>(intersection_size(noisy, gold)) / static_cast<double>(denom);
}

struct OperationMix {
  double delete_weight = 1.0;
  double replace_weight = 1.0;
  double insert_weight = 1.0;
};

struct NoiseSpec {
  double target_accuracy = 1.0;
  OperationMix mix;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(target_accuracy >= 0.0 && target_accuracy <= 1.0)) {
      throw Error("noise: target accuracy must lie in [0, 1]");
    }
    const double w[] = {mix.delete_weight, mix.replace_weight, mix.insert_weight};
    double total = 0.0;
    for (double x : w) {
      if (!(x >= 0.0) || !std::isfinite(x)) throw Error("noise: weights must be finite and non-negative");
      total += x;
    }
    if (total <= 0.0) throw Error("noise: operation weights are all zero");
  }
};

enum class NoiseOp { kDelete, kReplace, kInsert };

struct NoiseOutcome {
  DialogueState state;
  std::size_t deletes = 0;
  std::size_t replaces = 0;
  std::size_t inserts = 0;
  double accuracy = 1.0;
};

// Edits are drawn one at a time from the operation mix until accuracy falls
// below target + 1/(2n). Delete and replace only ever touch tuples that are
// still correct, and every edit lowers accuracy by at most 1/n, so the
// realized accuracy ends within 1/(2n) of the target; with deletes or
// replaces only this is exactly round((1 - target) * n) edits.
//
// Fallbacks: insert with no absent legal tuple left -> replace; replace on
// an open-valued slot or with no alternative value -> delete.
//
// `universe` is Ontology::closed_tuple_universe(), passed in so corpus-wide
// callers compute it once.
inline NoiseOutcome inject_noise_detailed(const DialogueState& gold, const NoiseSpec& spec,
                                          const Ontology& ontology,
                                          const std::vector<StateTuple>& universe) {
  spec.validate();
  NoiseOutcome out;
  out.state = gold;
  const std::size_t n = gold.size();
  if (n == 0) return out;

  SeededRng rng(spec.seed);
  std::vector<StateTuple> surviving(gold.begin(), gold.end());
  const double total_weight =
      spec.mix.delete_weight + spec.mix.replace_weight + spec.mix.insert_weight;
  const double two_n = 2.0 * static_cast<double>(n);

  auto keep_going = [&] {
    const double denom = static_cast<double>(std::max(out.state.size(), n));
    return two_n * static_cast<double>(surviving.size()) >=
           (two_n * spec.target_accuracy + 1.0) * denom;
  };

  while (!surviving.empty() && keep_going()) {
    const double u = rng.unit() * total_weight;
    NoiseOp op = u < spec.mix.delete_weight ? NoiseOp::kDelete
                 : u < spec.mix.delete_weight + spec.mix.replace_weight ? NoiseOp::kReplace
                                                                         : NoiseOp::kInsert;
    if (op == NoiseOp::kInsert) {
      std::vector<const StateTuple*> absent;
      for (const StateTuple& t : universe) {
        if (!out.state.contains(t) && !gold.contains(t)) absent.push_back(&t);
      }
      if (!absent.empty()) {
        out.state.insert(*absent[rng.uniform_index(absent.size())]);
        ++out.inserts;
        continue;
      }
      op = NoiseOp::kReplace;
    }
    const std::size_t victim = rng.uniform_index(surviving.size());
    const StateTuple target = surviving[victim];
    if (op == NoiseOp::kReplace) {
      std::vector<const std::string*> alternatives;
      const SlotSchema* slot = ontology.find_slot(target.domain, target.slot);
      if (slot != nullptr && !slot->open) {
        for (const std::string& v : slot->values) {
          StateTuple candidate{target.domain, target.intent, target.slot, v};
          if (v != target.value && !out.state.contains(candidate) && !gold.contains(candidate)) {
            alternatives.push_back(&v);
          }
        }
      }
      if (!alternatives.empty()) {
        StateTuple replaced = target;
        replaced.value = *alternatives[rng.uniform_index(alternatives.size())];
        out.state.erase(target);
        out.state.insert(std::move(replaced));
        surviving.erase(surviving.begin() + static_cast<std::ptrdiff_t>(victim));
        ++out.replaces;
        continue;
      }
    }
    out.state.erase(target);
    surviving.erase(surviving.begin() + static_cast<std::ptrdiff_t>(victim));
    ++out.deletes;
  }
  out.accuracy = tuple_accuracy(out.state, gold);
  return out;
}

inline DialogueState inject_noise(const DialogueState& state, const NoiseSpec& spec,
                                  const Ontology& ontology) {
  return inject_noise_detailed(state, spec, ontology, ontology.closed_tuple_universe()).state;
}

struct DomainSplit {
  std::string target_domain;
  std::vector<std::string> train;    // includes the few-shot ids
  std::vector<std::string> test;
  std::vector<std::string> fewshot;
  std::uint64_t seed = 0;
  double fewshot_fraction = 0.0;
  std::vector<std::string> warnings;
};

// Leave-one-domain-out split over single-domain dialogues. The training
// side is every single-domain dialogue of the other domains in
// `train_partition` plus a seeded uniform sample of round(fraction * pool)
// target-domain dialogues from it; the test side is every single-domain
// target dialogue in `test_partition`. Multi-domain dialogues are dropped.
inline DomainSplit make_da_splits(const std::vector<Dialogue>& train_partition,
                                  const std::vector<Dialogue>& test_partition,
                                  const std::string& target_domain,
                                  double fewshot_fraction, std::uint64_t seed) {
  if (!(fewshot_fraction >= 0.0 && fewshot_fraction <= 1.0)) {
    throw Error("split: few-shot fraction must lie in [0, 1]");
  }
  DomainSplit split;
  split.target_domain = target_domain;
  split.seed = seed;
  split.fewshot_fraction = fewshot_fraction;

  auto single = [&](const Dialogue& d) { return d.domains.size() == 1; };
  auto is_target = [&](const Dialogue& d) {
    return single(d) && *d.domains.begin() == target_domain;
  };

  for (const Dialogue& d : test_partition) {
    if (is_target(d)) split.test.push_back(d.id);
  }
  if (split.test.empty()) {
    throw Error("split: no single-domain \"" + target_domain +
                "\" dialogues in the test partition");
  }

  std::vector<std::string> pool;
  for (const Dialogue& d : train_partition) {
    if (!single(d)) continue;
    if (is_target(d)) {
      pool.push_back(d.id);
    } else {
      split.train.push_back(d.id);
    }
  }

  std::size_t wanted = static_cast<std::size_t>(
      std::llround(fewshot_fraction * static_cast<double>(pool.size())));
  if (fewshot_fraction > 0.0 && pool.empty()) {
    split.warnings.push_back("few-shot pool for \"" + target_domain +
                             "\" is empty; taking none");
  }
  wanted = std::min(wanted, pool.size());
  // Partial Fisher-Yates over pool positions; ids keep their file order.
  SeededRng rng(seed);
  std::vector<std::size_t> order(pool.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (std::size_t i = 0; i < wanted; ++i) {
    std::size_t j = i + rng.uniform_index(order.size() - i);
    std::swap(order[i], order[j]);
  }
  std::vector<std::size_t> picked(order.begin(),
                                  order.begin() + static_cast<std::ptrdiff_t>(wanted));
  std::sort(picked.begin(), picked.end());
  for (std::size_t i : picked) {
    split.fewshot.push_back(pool[i]);
    split.train.push_back(pool[i]);
  }

  std::set<std::string> train_ids(split.train.begin(), split.train.end());
  for (const auto& id : split.test) {
    if (train_ids.count(id)) {
      throw Error("split: dialogue \"" + id + "\" appears in both partitions");
    }
  }
  return split;
}

inline nlohmann::json to_json(const DomainSplit& s) {
  return {{"target_domain", s.target_domain},
          {"seed", s.seed},
          {"fewshot_fraction", s.fewshot_fraction},
          {"train_size", s.train.size()},
          {"test_size", s.test.size()},
          {"fewshot_size", s.fewshot.size()},
          {"warnings", s.warnings}};
}

}  // namespace todsum
