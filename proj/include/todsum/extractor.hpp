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

// Ontology-driven extraction of (domain, intent, slot, value) tuples from
// free-text summaries, plus the template renderer used to close the loop in
// tests.
//
// Extraction runs in three stages over lowercased word tokens:
//
//  1. Domain scopes. Sentences are assigned to the domain whose cue phrase
//     (domain name or declared synonym) they contain; sentences without a
//     cue inherit the previous scope, and text before the first cue belongs
//     to the first detected domain. A sentence naming several domains is
//     split before each new domain's cue, at the preceding clause break when
//     there is one.
//  2. Intents. Scopes are split the same way on intent cue phrases. A scope
//     with no intent cue takes the domain's sole intent, or the intent of
//     the previous scope of the same domain when it carried no domain cue.
//  3. Values. A slot cue directly followed by a legal value ("stars 4",
//     "name acorn guest house") attaches unconditionally; open-valued slots
//     are only ever read this way. Otherwise the longest surface that some
//     closed slot in scope accepts is matched. A surface accepted by several
//     slots is attached only if a slot cue directly follows it ("4 people")
//     and is recorded as unattached otherwise. "no"/"not" right before a
//     free-standing value suppresses it.
//
// Value spans claimed by a slot cue are masked from domain and intent cue
// detection, so "destination gonville hotel" does not open a hotel scope.

#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "todsum/error.hpp"
#include "todsum/ontology.hpp"
#include "todsum/state.hpp"
#include "todsum/text.hpp"

namespace todsum {

struct CharSpan {
  std::size_t begin = 0;
  std::size_t end = 0;

  friend auto operator<=>(const CharSpan&, const CharSpan&) = default;
};

struct SlotRef {
  std::string domain;
  std::string slot;

  friend auto operator<=>(const SlotRef&, const SlotRef&) = default;
};

// A value that several slots in scope accept and nothing disambiguates.
struct UnattachedValue {
  std::string surface;
  CharSpan span;
  std::vector<SlotRef> candidates;
};

// A value attached to a slot whose intent could not be resolved. Excluded
// from the extracted tuples.
struct AmbiguousTuple {
  std::string domain;
  std::string slot;
  std::string value;
  CharSpan span;
  std::vector<std::string> candidate_intents;
};

struct ExtractionResult {
  DialogueState tuples;
  std::map<StateTuple, CharSpan> spans;  // first occurrence of each tuple
  std::vector<UnattachedValue> unattached;
  std::vector<AmbiguousTuple> ambiguous;
};

namespace detail {

enum Break : unsigned char { kNoBreak = 0, kClauseBreak = 1, kSentenceBreak = 2 };

struct Word {
  std::string text;  // lowercased, outer punctuation stripped
  std::size_t begin = 0;
  std::size_t end = 0;
  Break brk = kNoBreak;  // boundary after this word
};

inline std::vector<Word> split_words(std::string_view s) {
  std::vector<Word> words;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && text::is_space(s[i])) ++i;
    std::size_t b = i;
    while (i < s.size() && !text::is_space(s[i])) ++i;
    std::size_t e = i;
    if (b == e) break;
    Break brk = kNoBreak;
    while (b < e && text::is_ascii_punct(s[b])) ++b;
    while (e > b && text::is_ascii_punct(s[e - 1])) {
      char c = s[e - 1];
      if (c == '.' || c == '!' || c == '?') {
        brk = kSentenceBreak;
      } else if ((c == ',' || c == ';') && brk == kNoBreak) {
        brk = kClauseBreak;
      }
      --e;
    }
    if (b == e) {
      // Bare punctuation such as " , " closes the previous word.
      if (!words.empty()) {
        for (std::size_t k = b; k < i; ++k) {
          char c = s[k];
          if (c == '.' || c == '!' || c == '?') {
            words.back().brk = kSentenceBreak;
          } else if ((c == ',' || c == ';') && words.back().brk == kNoBreak) {
            words.back().brk = kClauseBreak;
          }
        }
      }
      continue;
    }
    words.push_back({text::to_lower(s.substr(b, e - b)), b, e, brk});
  }
  return words;
}

using Phrase = std::vector<std::string>;

inline Phrase to_phrase(std::string_view cue) {
  Phrase p;
  for (auto& w : split_words(cue)) p.push_back(std::move(w.text));
  return p;
}

}  // namespace detail

class TupleExtractor {
 public:
  // The ontology must outlive the extractor.
  explicit TupleExtractor(const Ontology& ontology) {
    for (const auto& [dname, d] : ontology.domains()) {
      CompiledDomain cd;
      cd.schema = &d;
      for (const auto& c : d.cues) add(cd.cues, c, dname);
      std::set<std::string> used_slots;
      for (const auto& [iname, intent] : d.intents) {
        for (const auto& c : intent.cues) add(cd.intent_cues, c, iname);
        used_slots.insert(intent.slots.begin(), intent.slots.end());
      }
      for (const auto& sname : used_slots) {
        const SlotSchema& s = d.slots.at(sname);
        std::vector<std::string> cues = s.cues;
        if (cues.empty()) {
          std::string spaced = sname;
          std::replace(spaced.begin(), spaced.end(), '_', ' ');
          cues.push_back(spaced);
        }
        for (const auto& c : cues) add(cd.slot_cues, c, sname);
        if (!s.open) {
          cd.closed_slots.push_back(&s);
          for (const auto& v : s.values) {
            cd.max_value_words = std::max(cd.max_value_words, word_count(v));
          }
          for (const auto& [alias, _] : s.alias_index) {
            cd.max_value_words = std::max(cd.max_value_words, word_count(alias));
          }
        }
      }
      // Room for a trailing unit word ("4 stars", "2 people").
      cd.max_value_words += 2;
      domains_.push_back(std::move(cd));
    }
  }

  ExtractionResult operator()(std::string_view summary) const;

 private:
  struct Lexeme {
    detail::Phrase phrase;
    std::string target;  // domain, intent or slot name
  };

  struct CompiledDomain {
    const DomainSchema* schema = nullptr;
    std::vector<Lexeme> cues;
    std::vector<Lexeme> intent_cues;
    std::vector<Lexeme> slot_cues;
    std::vector<const SlotSchema*> closed_slots;
    std::size_t max_value_words = 1;
  };

  struct Match {
    std::size_t length = 0;
    std::vector<std::string> targets;  // every target sharing that length
  };

  struct ValueMatch {
    std::size_t first = 0;
    std::size_t last = 0;  // exclusive
    std::string value;
  };

  struct Segment {
    std::size_t first = 0;
    std::size_t last = 0;
    std::string name;  // domain or intent; empty when unresolved
    bool has_cue = false;
  };

  static void add(std::vector<Lexeme>& into, const std::string& cue,
                  const std::string& target) {
    detail::Phrase p = detail::to_phrase(cue);
    if (!p.empty()) into.push_back({std::move(p), target});
  }

  static std::size_t word_count(const std::string& s) {
    return text::split_whitespace(s).size();
  }

  // Longest lexeme matching at `at` without crossing a boundary, `limit`,
  // or a blocked word.
  static Match longest(const std::vector<Lexeme>& lexemes,
                       const std::vector<detail::Word>& words, std::size_t at,
                       std::size_t limit, const std::vector<char>* blocked) {
    Match best;
    for (const Lexeme& lx : lexemes) {
      const std::size_t len = lx.phrase.size();
      if (len < best.length || at + len > limit) continue;
      bool ok = true;
      for (std::size_t k = 0; k < len && ok; ++k) {
        const auto& w = words[at + k];
        ok = w.text == lx.phrase[k] && (blocked == nullptr || !(*blocked)[at + k]) &&
             (k + 1 == len || w.brk == detail::kNoBreak);
      }
      if (!ok) continue;
      if (len > best.length) {
        best.length = len;
        best.targets.clear();
      }
      if (std::find(best.targets.begin(), best.targets.end(), lx.target) ==
          best.targets.end()) {
        best.targets.push_back(lx.target);
      }
    }
    return best;
  }

  static std::string joined(const std::vector<detail::Word>& words,
                            std::size_t first, std::size_t last) {
    std::string out;
    for (std::size_t k = first; k < last; ++k) {
      if (k > first) out += ' ';
      out += words[k].text;
    }
    return out;
  }

  static bool contiguous(const std::vector<detail::Word>& words,
                         std::size_t first, std::size_t last) {
    for (std::size_t k = first; k + 1 < last; ++k) {
      if (words[k].brk != detail::kNoBreak) return false;
    }
    return true;
  }

  // Value for `slot` starting exactly at word `at`, which must directly
  // follow its cue (no boundary after word at-1).
  std::optional<ValueMatch> value_after_cue(const CompiledDomain& cd,
                                            const SlotSchema& slot,
                                            const std::vector<detail::Word>& words,
                                            std::size_t at,
                                            std::size_t limit) const {
    if (at >= limit || at == 0 || words[at - 1].brk != detail::kNoBreak) {
      return std::nullopt;
    }
    if (slot.open) {
      std::size_t end = at;
      while (end < limit) {
        if (end > at && longest(cd.slot_cues, words, end, limit, nullptr).length > 0) break;
        ++end;
        if (words[end - 1].brk != detail::kNoBreak) break;
      }
      auto value = Ontology::normalize_value(slot, joined(words, at, end));
      if (!value) return std::nullopt;
      return ValueMatch{at, end, *value};
    }
    std::size_t max_len = std::min(cd.max_value_words, limit - at);
    for (std::size_t len = max_len; len >= 1; --len) {
      if (!contiguous(words, at, at + len)) continue;
      if (auto value = Ontology::normalize_value(slot, joined(words, at, at + len))) {
        return ValueMatch{at, at + len, *value};
      }
    }
    return std::nullopt;
  }

  const CompiledDomain* compiled(const std::string& domain) const {
    for (const auto& cd : domains_) {
      if (cd.schema->name == domain) return &cd;
    }
    return nullptr;
  }

  // Splits [first, last) before each hit whose target differs from the
  // previous one, preferring the last clause break in between.
  static std::vector<Segment> split_on_hits(
      const std::vector<detail::Word>& words, std::size_t first,
      std::size_t last,
      const std::vector<std::pair<std::pair<std::size_t, std::size_t>, std::string>>& hits) {
    std::vector<Segment> out;
    std::size_t start = first;
    std::string current = hits.front().second;
    for (std::size_t k = 1; k < hits.size(); ++k) {
      if (hits[k].second == current) continue;
      std::size_t split = hits[k].first.first;
      const std::size_t prev_end = hits[k - 1].first.second;
      for (std::size_t p = split; p > prev_end; --p) {
        if (words[p - 1].brk != detail::kNoBreak) {
          split = p;
          break;
        }
      }
      out.push_back({start, split, current, true});
      start = split;
      current = hits[k].second;
    }
    out.push_back({start, last, current, true});
    return out;
  }

  void extract_values(const CompiledDomain& cd, const Segment& scope,
                      const std::vector<detail::Word>& words,
                      const std::vector<char>& marked, std::string_view summary,
                      ExtractionResult& result) const;

  void attach(const CompiledDomain& cd, const std::string& intent,
              const std::string& slot, const std::string& value, CharSpan span,
              ExtractionResult& result) const {
    const DomainSchema& d = *cd.schema;
    std::string resolved;
    if (!intent.empty() && d.intent_has_slot(intent, slot)) {
      resolved = intent;
    } else {
      std::vector<std::string> owners;
      for (const auto& [iname, _] : d.intents) {
        if (d.intent_has_slot(iname, slot)) owners.push_back(iname);
      }
      if (owners.size() != 1) {
        result.ambiguous.push_back({d.name, slot, value, span, owners});
        return;
      }
      resolved = owners.front();
    }
    StateTuple t{d.name, resolved, slot, value};
    if (result.tuples.insert(t)) result.spans.emplace(std::move(t), span);
  }

  std::vector<CompiledDomain> domains_;
};

inline ExtractionResult TupleExtractor::operator()(std::string_view summary) const {
  ExtractionResult result;
  const std::vector<detail::Word> words = detail::split_words(summary);
  const std::size_t n = words.size();
  if (n == 0) return result;

  // Stage 0: value spans claimed by a directly preceding slot cue.
  std::vector<char> claimed(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& cd : domains_) {
      Match cue = longest(cd.slot_cues, words, i, n, nullptr);
      if (cue.length == 0) continue;
      for (const auto& sname : cue.targets) {
        if (auto v = value_after_cue(cd, cd.schema->slots.at(sname), words,
                                     i + cue.length, n)) {
          std::fill(claimed.begin() + static_cast<std::ptrdiff_t>(v->first),
                    claimed.begin() + static_cast<std::ptrdiff_t>(v->last), 1);
        }
      }
    }
  }

  // Stage 1: domain scopes.
  std::vector<Lexeme> all_domain_cues;
  for (const auto& cd : domains_) {
    all_domain_cues.insert(all_domain_cues.end(), cd.cues.begin(), cd.cues.end());
  }
  std::vector<char> marked(n, 0);
  using Hit = std::pair<std::pair<std::size_t, std::size_t>, std::string>;
  std::vector<Hit> domain_hits;
  for (std::size_t i = 0; i < n;) {
    Match m = longest(all_domain_cues, words, i, n, &claimed);
    if (m.length == 0) {
      ++i;
      continue;
    }
    std::fill(marked.begin() + static_cast<std::ptrdiff_t>(i),
              marked.begin() + static_cast<std::ptrdiff_t>(i + m.length), 1);
    // A phrase that is a cue of two domains names neither.
    if (m.targets.size() == 1) domain_hits.push_back({{i, i + m.length}, m.targets[0]});
    i += m.length;
  }

  std::vector<Segment> scopes;
  std::string carried;
  std::size_t hit = 0;
  for (std::size_t s = 0; s < n;) {
    std::size_t e = s;
    while (e < n && words[e].brk != detail::kSentenceBreak) ++e;
    e = std::min(e + 1, n);
    std::vector<Hit> in_sentence;
    while (hit < domain_hits.size() && domain_hits[hit].first.first < e) {
      in_sentence.push_back(domain_hits[hit++]);
    }
    if (in_sentence.empty()) {
      scopes.push_back({s, e, carried, false});
    } else {
      for (auto& seg : split_on_hits(words, s, e, in_sentence)) {
        scopes.push_back(std::move(seg));
      }
      carried = scopes.back().name;
    }
    s = e;
  }
  std::string first_domain;
  for (const auto& sc : scopes) {
    if (!sc.name.empty()) {
      first_domain = sc.name;
      break;
    }
  }
  if (first_domain.empty()) return result;
  for (auto& sc : scopes) {
    if (sc.name.empty()) sc.name = first_domain;
  }

  // Stage 2: intent sub-scopes, then stage 3 inside each.
  std::map<std::string, std::string> last_intent;
  for (const Segment& scope : scopes) {
    const CompiledDomain& cd = *compiled(scope.name);
    std::vector<Hit> intent_hits;
    for (std::size_t i = scope.first; i < scope.last;) {
      Match m = longest(cd.intent_cues, words, i, scope.last, &claimed);
      bool free = m.length > 0;
      for (std::size_t k = i; free && k < i + m.length; ++k) free = !marked[k];
      if (!free) {
        ++i;
        continue;
      }
      std::fill(marked.begin() + static_cast<std::ptrdiff_t>(i),
                marked.begin() + static_cast<std::ptrdiff_t>(i + m.length), 1);
      if (m.targets.size() == 1) intent_hits.push_back({{i, i + m.length}, m.targets[0]});
      i += m.length;
    }
    std::vector<Segment> subs;
    if (intent_hits.empty()) {
      std::string intent;
      if (cd.schema->intents.size() == 1) {
        intent = cd.schema->intents.begin()->first;
      } else if (!scope.has_cue) {
        if (auto it = last_intent.find(scope.name); it != last_intent.end()) {
          intent = it->second;
        }
      }
      subs.push_back({scope.first, scope.last, intent, false});
    } else {
      subs = split_on_hits(words, scope.first, scope.last, intent_hits);
    }
    for (const Segment& sub : subs) {
      extract_values(cd, sub, words, marked, summary, result);
      if (!sub.name.empty()) last_intent[scope.name] = sub.name;
    }
  }
  return result;
}

inline void TupleExtractor::extract_values(const CompiledDomain& cd,
                                           const Segment& scope,
                                           const std::vector<detail::Word>& words,
                                           const std::vector<char>& marked,
                                           std::string_view summary,
                                           ExtractionResult& result) const {
  auto span_of = [&](std::size_t first, std::size_t last) {
    return CharSpan{words[first].begin, words[last - 1].end};
  };
  for (std::size_t i = scope.first; i < scope.last;) {
    if (marked[i]) {
      ++i;
      continue;
    }
    Match cue = longest(cd.slot_cues, words, i, scope.last, &marked);
    if (cue.length > 0) {
      std::vector<std::pair<std::string, ValueMatch>> found;
      for (const auto& sname : cue.targets) {
        if (auto v = value_after_cue(cd, cd.schema->slots.at(sname), words,
                                     i + cue.length, scope.last)) {
          found.emplace_back(sname, *v);
        }
      }
      if (found.size() == 1) {
        const auto& [sname, v] = found.front();
        attach(cd, scope.name, sname, v.value, span_of(v.first, v.last), result);
        i = v.last;
        continue;
      }
      if (found.size() > 1) {
        const ValueMatch& v = found.front().second;
        CharSpan sp = span_of(v.first, v.last);
        UnattachedValue u{std::string(summary.substr(sp.begin, sp.end - sp.begin)), sp, {}};
        for (const auto& f : found) u.candidates.push_back({cd.schema->name, f.first});
        result.unattached.push_back(std::move(u));
        i = v.last;
        continue;
      }
      i += cue.length;
      continue;
    }

    // Longest free-standing surface that some closed slot accepts.
    std::size_t len = std::min(cd.max_value_words, scope.last - i);
    std::vector<std::pair<const SlotSchema*, std::string>> candidates;
    for (; len >= 1; --len) {
      bool usable = contiguous(words, i, i + len);
      for (std::size_t k = i; usable && k < i + len; ++k) usable = !marked[k];
      if (!usable) continue;
      std::string surface = joined(words, i, i + len);
      for (const SlotSchema* s : cd.closed_slots) {
        if (auto v = Ontology::normalize_value(*s, surface)) {
          candidates.emplace_back(s, *v);
        }
      }
      if (!candidates.empty()) break;
    }
    if (candidates.empty()) {
      ++i;
      continue;
    }
    const std::size_t end = i + len;
    const bool negated = i > 0 && words[i - 1].brk == detail::kNoBreak &&
                         (words[i - 1].text == "no" || words[i - 1].text == "not");
    if (negated) {
      i = end;
      continue;
    }
    if (candidates.size() > 1 && words[end - 1].brk == detail::kNoBreak) {
      Match next = longest(cd.slot_cues, words, end, scope.last, &marked);
      std::vector<std::pair<const SlotSchema*, std::string>> cued;
      for (const auto& c : candidates) {
        if (std::find(next.targets.begin(), next.targets.end(), c.first->name) !=
            next.targets.end()) {
          cued.push_back(c);
        }
      }
      if (cued.size() == 1) candidates = std::move(cued);
    }
    if (candidates.size() == 1) {
      attach(cd, scope.name, candidates.front().first->name,
             candidates.front().second, span_of(i, end), result);
    } else {
      UnattachedValue u{std::string(summary.substr(words[i].begin,
                                                   words[end - 1].end - words[i].begin)),
                        span_of(i, end), {}};
      for (const auto& c : candidates) u.candidates.push_back({cd.schema->name, c.first->name});
      result.unattached.push_back(std::move(u));
    }
    i = end;
  }
}

inline ExtractionResult extract_tuples(std::string_view summary,
                                       const Ontology& ontology) {
  return TupleExtractor(ontology)(summary);
}

// One sentence per (domain, intent) group in canonical order:
//   "<template> with <slot cue> <value>, <slot cue> <value>."
// The slot cue is the first declared cue, or the slot name.
inline std::string render_reference_summary(const DialogueState& state,
                                            const Ontology& ontology) {
  std::vector<std::string> sentences;
  auto it = state.begin();
  while (it != state.end()) {
    const DomainSchema* d = ontology.find_domain(it->domain);
    if (d == nullptr) throw Error("render: unknown domain \"" + it->domain + "\"");
    auto iit = d->intents.find(it->intent);
    if (iit == d->intents.end() || !iit->second.render_template) {
      throw Error("render: no template for intent \"" + it->intent + "\"");
    }
    std::vector<std::string> parts;
    const std::string domain = it->domain;
    const std::string intent = it->intent;
    for (; it != state.end() && it->domain == domain && it->intent == intent; ++it) {
      auto sit = d->slots.find(it->slot);
      if (sit == d->slots.end()) {
        throw Error("render: unknown slot \"" + it->slot + "\"");
      }
      std::string cue = sit->second.cues.empty() ? it->slot : sit->second.cues.front();
      std::replace(cue.begin(), cue.end(), '_', ' ');
      parts.push_back(cue + " " + it->value);
    }
    sentences.push_back(*iit->second.render_template + " with " +
                        text::join(parts, ", ") + ".");
  }
  return text::join(sentences, " ");
}

inline nlohmann::json to_json(const ExtractionResult& r) {
  using nlohmann::json;
  json tuples = json::array();
  json spans = json::array();
  for (const auto& t : r.tuples) {
    json tj = {{"domain", t.domain}, {"intent", t.intent}, {"slot", t.slot},
               {"value", t.value}};
    tuples.push_back(tj);
    const CharSpan& sp = r.spans.at(t);
    tj["begin"] = sp.begin;
    tj["end"] = sp.end;
    spans.push_back(std::move(tj));
  }
  json unattached = json::array();
  for (const auto& u : r.unattached) {
    json cands = json::array();
    for (const auto& c : u.candidates) cands.push_back({{"domain", c.domain}, {"slot", c.slot}});
    unattached.push_back({{"surface", u.surface},
                          {"begin", u.span.begin},
                          {"end", u.span.end},
                          {"candidates", std::move(cands)}});
  }
  json ambiguous = json::array();
  for (const auto& a : r.ambiguous) {
    ambiguous.push_back({{"domain", a.domain},
                         {"slot", a.slot},
                         {"value", a.value},
                         {"begin", a.span.begin},
                         {"end", a.span.end},
                         {"candidate_intents", a.candidate_intents}});
  }
  return {{"tuples", std::move(tuples)},
          {"spans", std::move(spans)},
          {"unattached", std::move(unattached)},
          {"ambiguous", std::move(ambiguous)}};
}

}  // namespace todsum
