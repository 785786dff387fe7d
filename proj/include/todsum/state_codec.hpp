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

// Flat-text encoding of dialogue states and the joint state+summary target.
//
//   hotel book_hotel(price=cheap ;stars=4) find_hotel(area=north) restaurant ...
//
// Domains, intents and slots are emitted in lexicographic order and each
// domain name appears once before its first intent. The parser also accepts
// the domain name repeated before every intent.

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "todsum/error.hpp"
#include "todsum/ontology.hpp"
#include "todsum/state.hpp"
#include "todsum/text.hpp"

namespace todsum {

inline constexpr std::string_view kJointSentinel = "<|endoftext|>";

inline std::string serialize_state(const DialogueState& state) {
  std::string out;
  const std::string* domain = nullptr;
  const std::string* intent = nullptr;
  // std::set order is (domain, intent, slot, value): exactly the emit order.
  for (const StateTuple& t : state) {
    bool new_domain = domain == nullptr || *domain != t.domain;
    bool new_intent = new_domain || *intent != t.intent;
    if (new_intent && intent != nullptr) out += ")";
    if (new_domain) {
      if (!out.empty()) out += ' ';
      out += t.domain;
      domain = &t.domain;
    }
    if (new_intent) {
      out += ' ';
      out += t.intent;
      out += '(';
      intent = &t.intent;
    } else {
      out += " ;";
    }
    out += t.slot;
    out += '=';
    out += t.value;
  }
  if (intent != nullptr) out += ")";
  return out;
}

namespace detail {

class StateParser {
 public:
  StateParser(std::string_view text, const Ontology* ontology)
      : text_(text), ontology_(ontology) {}

  DialogueState parse() {
    DialogueState state;
    std::optional<std::string> domain;
    skip_space();
    while (pos_ < text_.size()) {
      std::size_t name_at = pos_;
      std::string name = read_name();
      if (name.empty()) fail("expected a domain or intent name", name_at);
      skip_space();
      if (pos_ < text_.size() && text_[pos_] == '(') {
        if (!domain) fail("intent \"" + name + "\" before any domain", name_at);
        ++pos_;
        parse_slot_list(*domain, name, state);
      } else {
        domain = std::move(name);
      }
      skip_space();
    }
    return state;
  }

 private:
  static bool is_delim(char c) {
    return c == '(' || c == ')' || c == ';' || c == '=';
  }

  [[noreturn]] void fail(const std::string& what, std::size_t at) const {
    throw ParseError("state text: " + what + " at offset " + std::to_string(at),
                     at);
  }

  void skip_space() {
    while (pos_ < text_.size() && text::is_space(text_[pos_])) ++pos_;
  }

  std::string read_name() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && !text::is_space(text_[pos_]) &&
           !is_delim(text_[pos_])) {
      ++pos_;
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  void parse_slot_list(const std::string& domain, const std::string& intent,
                       DialogueState& state) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == ')') {
      ++pos_;
      return;
    }
    while (true) {
      skip_space();
      std::size_t slot_at = pos_;
      std::string slot = read_name();
      if (pos_ >= text_.size()) fail("unbalanced parenthesis", text_.size());
      if (slot.empty()) fail("expected a slot name", slot_at);
      skip_space();
      if (pos_ >= text_.size()) fail("unbalanced parenthesis", text_.size());
      if (text_[pos_] != '=') fail("missing \"=\" after slot \"" + slot + "\"", pos_);
      ++pos_;
      std::size_t value_at = pos_;
      while (pos_ < text_.size() && text_[pos_] != ';' && text_[pos_] != ')') {
        if (text_[pos_] == '(' || text_[pos_] == '=') {
          fail("unexpected \"" + std::string(1, text_[pos_]) + "\" in value", pos_);
        }
        ++pos_;
      }
      if (pos_ >= text_.size()) fail("unbalanced parenthesis", text_.size());
      std::string value = text::collapse_whitespace(
          text_.substr(value_at, pos_ - value_at));
      if (value.empty()) fail("empty value for slot \"" + slot + "\"", value_at);
      state.insert({domain, intent, slot, normalized(domain, slot, value)});
      char delim = text_[pos_++];
      if (delim == ')') return;
    }
  }

  std::string normalized(const std::string& domain, const std::string& slot,
                         const std::string& value) const {
    if (ontology_ == nullptr) return value;
    const SlotSchema* s = ontology_->find_slot(domain, slot);
    if (s == nullptr) return value;  // unknown names are left to validation
    auto canon = Ontology::normalize_value(*s, value);
    return canon ? *canon : value;
  }

  std::string_view text_;
  const Ontology* ontology_;
  std::size_t pos_ = 0;
};

}  // namespace detail

// Structural errors throw ParseError carrying the character offset. Values
// are normalized through the ontology when one is given; unknown names are
// kept verbatim for validation to report.
inline DialogueState parse_state(std::string_view text,
                                 const Ontology* ontology = nullptr) {
  return detail::StateParser(text, ontology).parse();
}

inline DialogueState parse_state(std::string_view text,
                                 const Ontology& ontology) {
  return parse_state(text, &ontology);
}

inline std::string encode_joint_target(const DialogueState& state,
                                       std::string_view summary) {
  if (text::is_blank(summary)) throw Error("joint target: empty summary");
  if (text::contains(summary, kJointSentinel)) {
    throw Error("joint target: summary contains the sentinel " +
                std::string(kJointSentinel));
  }
  return serialize_state(state) + " " + std::string(kJointSentinel) + " " +
         std::string(summary);
}

struct JointOutput {
  DialogueState state;
  std::string summary;
  bool missing_sentinel = false;
  bool malformed_state = false;
  std::string state_error;  // parser message when malformed_state is set
};

// Never throws: a missing sentinel or an unparsable state prefix is flagged
// and scored as an empty state.
inline JointOutput decode_joint_output(std::string_view output,
                                       const Ontology* ontology = nullptr) {
  JointOutput out;
  std::size_t at = output.find(kJointSentinel);
  if (at == std::string_view::npos) {
    out.missing_sentinel = true;
    out.summary = std::string(text::trim(output));
    return out;
  }
  out.summary = std::string(text::trim(output.substr(at + kJointSentinel.size())));
  try {
    out.state = parse_state(output.substr(0, at), ontology);
  } catch (const ParseError& e) {
    out.malformed_state = true;
    out.state_error = e.what();
  }
  return out;
}

inline JointOutput decode_joint_output(std::string_view output,
                                       const Ontology& ontology) {
  return decode_joint_output(output, &ontology);
}

// Joint set match: the fraction of positions whose predicted state equals
// the gold state as a set.
inline double state_match_accuracy(const std::vector<DialogueState>& pred,
                                   const std::vector<DialogueState>& gold) {
  if (pred.size() != gold.size()) {
    throw Error("state accuracy: " + std::to_string(pred.size()) +
                " predictions for " + std::to_string(gold.size()) +
                " gold states");
  }
  if (gold.empty()) throw Error("state accuracy: no states to compare");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (pred[i] == gold[i]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(gold.size());
}

}  // namespace todsum
