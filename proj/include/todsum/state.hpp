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

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace todsum {

// One (domain, intent, slot, value) fact: the unit of factual matching.
// Ordering is lexicographic over the four fields, which is also the
// canonical on-disk and serialization order.
struct StateTuple {
  std::string domain;
  std::string intent;
  std::string slot;
  std::string value;

  friend auto operator<=>(const StateTuple&, const StateTuple&) = default;
  friend bool operator==(const StateTuple&, const StateTuple&) = default;

  bool same_slot_key(const StateTuple& o) const {
    return domain == o.domain && intent == o.intent && slot == o.slot;
  }
};

// A set of state tuples with order-free equality.
class DialogueState {
 public:
  using container_type = std::set<StateTuple>;
  using const_iterator = container_type::const_iterator;

  DialogueState() = default;
  DialogueState(std::initializer_list<StateTuple> tuples) : tuples_(tuples) {}
  template <typename It>
  DialogueState(It first, It last) : tuples_(first, last) {}

  // Returns false when the tuple was already present.
  bool insert(StateTuple t) { return tuples_.insert(std::move(t)).second; }
  bool erase(const StateTuple& t) { return tuples_.erase(t) > 0; }
  bool contains(const StateTuple& t) const { return tuples_.count(t) > 0; }

  std::size_t size() const noexcept { return tuples_.size(); }
  bool empty() const noexcept { return tuples_.empty(); }
  const_iterator begin() const noexcept { return tuples_.begin(); }
  const_iterator end() const noexcept { return tuples_.end(); }
  const container_type& tuples() const noexcept { return tuples_; }

  std::set<std::string> domains() const {
    std::set<std::string> out;
    for (const auto& t : tuples_) out.insert(t.domain);
    return out;
  }

  std::set<std::pair<std::string, std::string>> domain_intents() const {
    std::set<std::pair<std::string, std::string>> out;
    for (const auto& t : tuples_) out.emplace(t.domain, t.intent);
    return out;
  }

  friend bool operator==(const DialogueState&, const DialogueState&) = default;

 private:
  container_type tuples_;
};

inline std::size_t intersection_size(const DialogueState& a,
                                     const DialogueState& b) {
  std::size_t n = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

inline DialogueState set_difference(const DialogueState& a,
                                    const DialogueState& b) {
  DialogueState out;
  for (const auto& t : a) {
    if (!b.contains(t)) out.insert(t);
  }
  return out;
}

}  // namespace todsum
