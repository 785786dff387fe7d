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

// Corpus data model, JSONL readers/writers, validation and statistics.
//
// Corpus line:
//   {"id": "...", "turns": [{"speaker": "user"|"system", "text": "..."}],
//    "state": [{"domain", "intent", "slot", "value"}], "summary": "...",
//    "domains": ["..."]}
// "summary" is optional (unlabeled inputs); "domains" is derived from the
// state when absent.
//
// Prediction line:
//   {"id": "...", "summary": "...", "state": [...] | "<serialized state>"}

#pragma once

#include <cstddef>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "todsum/error.hpp"
#include "todsum/ontology.hpp"
#include "todsum/state.hpp"
#include "todsum/state_codec.hpp"
#include "todsum/text.hpp"
#include "todsum/tokenizer.hpp"

namespace todsum {

enum class Speaker { kUser, kSystem };

inline const char* to_string(Speaker s) {
  return s == Speaker::kUser ? "user" : "system";
}

struct Utterance {
  Speaker speaker = Speaker::kUser;
  std::string text;

  friend bool operator==(const Utterance&, const Utterance&) = default;
};

struct Dialogue {
  std::string id;
  std::vector<Utterance> turns;
  DialogueState state;
  std::optional<std::string> summary;
  std::set<std::string> domains;

  friend bool operator==(const Dialogue&, const Dialogue&) = default;
};

struct Prediction {
  std::string id;
  std::optional<std::string> summary;
  std::optional<DialogueState> state;
};

struct Violation {
  std::string dialogue_id;
  std::string field;    // "id", "turns[2].text", "state[0]", "domains", ...
  std::string message;

  std::string to_string() const {
    return "dialogue \"" + dialogue_id + "\", " + field + ": " + message;
  }
};

// Every violation cites exactly one field or tuple. Never throws.
inline std::vector<Violation> validate_dialogue(const Dialogue& d,
                                                const Ontology& ontology) {
  std::vector<Violation> out;
  auto add = [&](std::string field, std::string message) {
    out.push_back({d.id, std::move(field), std::move(message)});
  };
  if (text::is_blank(d.id)) add("id", "empty id");
  if (d.turns.empty()) add("turns", "dialogue has no turns");
  for (std::size_t i = 0; i < d.turns.size(); ++i) {
    if (text::is_blank(d.turns[i].text)) {
      add("turns[" + std::to_string(i) + "].text", "empty utterance");
    }
  }
  std::size_t i = 0;
  for (const StateTuple& t : d.state) {
    std::string field = "state[" + std::to_string(i++) + "]";
    if (t.domain.empty() || t.intent.empty() || t.slot.empty() ||
        text::is_blank(t.value)) {
      add(field, "tuple has an empty field");
    } else if (auto problem = ontology.check_tuple(t)) {
      add(field, *problem);
    }
  }
  if (d.domains != d.state.domains()) {
    add("domains", "domains do not match the domains of the state");
  }
  if (d.summary && text::is_blank(*d.summary)) add("summary", "empty summary");
  return out;
}

namespace detail {

inline const nlohmann::json& require(const nlohmann::json& obj,
                                     const char* key, std::size_t line) {
  if (!obj.contains(key)) {
    throw ParseError("line " + std::to_string(line) + ": missing field \"" +
                         key + "\"",
                     line);
  }
  return obj[key];
}

inline std::string require_string(const nlohmann::json& obj, const char* key,
                                  std::size_t line) {
  const auto& v = require(obj, key, line);
  if (!v.is_string()) {
    throw ParseError("line " + std::to_string(line) + ": field \"" + key +
                         "\" must be a string",
                     line);
  }
  return v.get<std::string>();
}

inline DialogueState state_from_json(const nlohmann::json& j, std::size_t line,
                                     const Ontology* ontology) {
  if (j.is_string()) {
    try {
      return parse_state(j.get<std::string>(), ontology);
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(line) + ": " + e.what(), line);
    }
  }
  if (!j.is_array()) {
    throw ParseError("line " + std::to_string(line) +
                         ": \"state\" must be an array or a serialized string",
                     line);
  }
  DialogueState state;
  for (const auto& tj : j) {
    if (!tj.is_object()) {
      throw ParseError("line " + std::to_string(line) +
                           ": state entries must be objects",
                       line);
    }
    state.insert({require_string(tj, "domain", line),
                  require_string(tj, "intent", line),
                  require_string(tj, "slot", line),
                  require_string(tj, "value", line)});
  }
  return state;
}

inline nlohmann::json state_to_json(const DialogueState& state) {
  nlohmann::json arr = nlohmann::json::array();
  for (const StateTuple& t : state) {
    arr.push_back({{"domain", t.domain},
                   {"intent", t.intent},
                   {"slot", t.slot},
                   {"value", t.value}});
  }
  return arr;
}

inline nlohmann::json parse_line(const std::string& line, std::size_t lineno) {
  try {
    auto j = nlohmann::json::parse(line);
    if (!j.is_object()) {
      throw ParseError("line " + std::to_string(lineno) +
                           ": expected a JSON object",
                       lineno);
    }
    return j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("line " + std::to_string(lineno) + ": " + e.what(), lineno);
  }
}

inline Dialogue dialogue_from_json(const nlohmann::json& j, std::size_t line) {
  Dialogue d;
  d.id = require_string(j, "id", line);
  const auto& turns = require(j, "turns", line);
  if (!turns.is_array()) {
    throw ParseError("line " + std::to_string(line) + ": \"turns\" must be an array",
                     line);
  }
  for (const auto& tj : turns) {
    if (!tj.is_object()) {
      throw ParseError("line " + std::to_string(line) + ": turns must be objects",
                       line);
    }
    std::string speaker = require_string(tj, "speaker", line);
    Utterance u;
    if (speaker == "user") {
      u.speaker = Speaker::kUser;
    } else if (speaker == "system") {
      u.speaker = Speaker::kSystem;
    } else {
      throw ParseError("line " + std::to_string(line) + ": unknown speaker \"" +
                           speaker + "\"",
                       line);
    }
    u.text = require_string(tj, "text", line);
    d.turns.push_back(std::move(u));
  }
  d.state = state_from_json(require(j, "state", line), line, nullptr);
  if (j.contains("summary") && !j["summary"].is_null()) {
    d.summary = require_string(j, "summary", line);
  }
  if (j.contains("domains")) {
    if (!j["domains"].is_array()) {
      throw ParseError("line " + std::to_string(line) +
                           ": \"domains\" must be an array",
                       line);
    }
    for (const auto& dj : j["domains"]) {
      if (!dj.is_string()) {
        throw ParseError("line " + std::to_string(line) +
                             ": domain names must be strings",
                         line);
      }
      d.domains.insert(dj.get<std::string>());
    }
  } else {
    d.domains = d.state.domains();
  }
  return d;
}

template <typename Fn>
void for_each_line(std::istream& in, Fn&& fn) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::is_blank(line)) continue;
    fn(parse_line(line, lineno), lineno);
  }
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open file: " + path);
  return in;
}

}  // namespace detail

inline nlohmann::json to_json(const Dialogue& d) {
  nlohmann::json turns = nlohmann::json::array();
  for (const auto& u : d.turns) {
    turns.push_back({{"speaker", to_string(u.speaker)}, {"text", u.text}});
  }
  nlohmann::json j = {{"id", d.id},
                      {"turns", std::move(turns)},
                      {"state", detail::state_to_json(d.state)},
                      {"domains", d.domains}};
  if (d.summary) j["summary"] = *d.summary;
  return j;
}

// Parses a corpus without ontology checks (structure and id uniqueness only).
inline std::vector<Dialogue> read_corpus(std::istream& in) {
  std::vector<Dialogue> out;
  std::map<std::string, std::size_t> seen;
  detail::for_each_line(in, [&](const nlohmann::json& j, std::size_t lineno) {
    Dialogue d = detail::dialogue_from_json(j, lineno);
    auto [it, fresh] = seen.emplace(d.id, lineno);
    if (!fresh) {
      throw ParseError("line " + std::to_string(lineno) + ": duplicate id \"" +
                           d.id + "\" (first seen on line " +
                           std::to_string(it->second) + ")",
                       lineno);
    }
    out.push_back(std::move(d));
  });
  return out;
}

inline std::vector<Dialogue> read_corpus(const std::string& path) {
  auto in = detail::open_input(path);
  return read_corpus(in);
}

// Parses, validates every dialogue and canonicalizes state values through
// the ontology. The first invalid dialogue raises a ValidationError listing
// all of its violations.
inline std::vector<Dialogue> load_corpus(std::istream& in,
                                         const Ontology& ontology) {
  std::vector<Dialogue> corpus = read_corpus(in);
  for (Dialogue& d : corpus) {
    auto violations = validate_dialogue(d, ontology);
    if (!violations.empty()) {
      std::string msg = "invalid dialogue:";
      for (const auto& v : violations) msg += "\n  " + v.to_string();
      throw ValidationError(msg);
    }
    DialogueState canonical;
    for (const StateTuple& t : d.state) canonical.insert(*ontology.canonicalize(t));
    d.state = std::move(canonical);
  }
  return corpus;
}

inline std::vector<Dialogue> load_corpus(const std::string& path,
                                         const Ontology& ontology) {
  auto in = detail::open_input(path);
  return load_corpus(in, ontology);
}

// One compact JSON object per line with sorted keys and tuples in canonical
// order, so save(load(save(c))) is byte-identical to save(c).
inline void save_corpus(std::ostream& out, const std::vector<Dialogue>& corpus) {
  for (const Dialogue& d : corpus) out << to_json(d).dump() << '\n';
}

inline void save_corpus(const std::string& path,
                        const std::vector<Dialogue>& corpus) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write file: " + path);
  save_corpus(out, corpus);
}

// A "state" given as a string is parsed with the codec and normalized
// through the ontology when one is supplied.
inline std::vector<Prediction> read_predictions(std::istream& in,
                                                const Ontology* ontology = nullptr) {
  std::vector<Prediction> out;
  std::set<std::string> seen;
  detail::for_each_line(in, [&](const nlohmann::json& j, std::size_t lineno) {
    Prediction p;
    p.id = detail::require_string(j, "id", lineno);
    if (!seen.insert(p.id).second) {
      throw ParseError("line " + std::to_string(lineno) + ": duplicate id \"" +
                           p.id + "\"",
                       lineno);
    }
    if (j.contains("summary") && !j["summary"].is_null()) {
      p.summary = detail::require_string(j, "summary", lineno);
    }
    if (j.contains("state") && !j["state"].is_null()) {
      p.state = detail::state_from_json(j["state"], lineno, ontology);
    }
    out.push_back(std::move(p));
  });
  return out;
}

inline std::vector<Prediction> read_predictions(const std::string& path,
                                                const Ontology* ontology = nullptr) {
  auto in = detail::open_input(path);
  return read_predictions(in, ontology);
}

inline nlohmann::json to_json(const Prediction& p) {
  nlohmann::json j = {{"id", p.id}};
  if (p.summary) j["summary"] = *p.summary;
  if (p.state) j["state"] = detail::state_to_json(*p.state);
  return j;
}

inline void save_predictions(std::ostream& out,
                             const std::vector<Prediction>& preds) {
  for (const auto& p : preds) out << to_json(p).dump() << '\n';
}

struct CorpusStats {
  std::size_t size = 0;
  double avg_dialogue_len = 0.0;  // tokens over all turns
  double avg_turns = 0.0;
  double avg_summary_len = 0.0;  // over dialogues that carry a summary
  std::size_t summaries = 0;
  double avg_domains_per_dialogue = 0.0;
  double avg_intents_per_dialogue = 0.0;  // distinct (domain, intent) pairs
  // Slot counts in two variants: distinct (domain, slot) pairs, i.e. a slot
  // repeated across domains counts per occurrence, and distinct slot names.
  double avg_slots_per_dialogue = 0.0;
  double avg_unique_slot_names_per_dialogue = 0.0;
};

// Integer totals are summed first and divided once, so the result does not
// depend on corpus order.
inline CorpusStats corpus_stats(const std::vector<Dialogue>& corpus,
                                const Tokenizer& tokenizer = Tokenizer{}) {
  if (corpus.empty()) throw Error("corpus statistics: empty corpus");
  std::size_t tokens = 0, turns = 0, summary_tokens = 0, summaries = 0;
  std::size_t domains = 0, intents = 0, slots = 0, slot_names = 0;
  for (const Dialogue& d : corpus) {
    turns += d.turns.size();
    for (const auto& u : d.turns) tokens += tokenizer(u.text).size();
    if (d.summary) {
      ++summaries;
      summary_tokens += tokenizer(*d.summary).size();
    }
    domains += d.domains.size();
    intents += d.state.domain_intents().size();
    std::set<std::pair<std::string, std::string>> domain_slots;
    std::set<std::string> names;
    for (const auto& t : d.state) {
      domain_slots.emplace(t.domain, t.slot);
      names.insert(t.slot);
    }
    slots += domain_slots.size();
    slot_names += names.size();
  }
  const double n = static_cast<double>(corpus.size());
  CorpusStats s;
  s.size = corpus.size();
  s.avg_dialogue_len = static_cast<double>(tokens) / n;
  s.avg_turns = static_cast<double>(turns) / n;
  s.summaries = summaries;
  s.avg_summary_len =
      summaries == 0 ? 0.0
                     : static_cast<double>(summary_tokens) /
                           static_cast<double>(summaries);
  s.avg_domains_per_dialogue = static_cast<double>(domains) / n;
  s.avg_intents_per_dialogue = static_cast<double>(intents) / n;
  s.avg_slots_per_dialogue = static_cast<double>(slots) / n;
  s.avg_unique_slot_names_per_dialogue = static_cast<double>(slot_names) / n;
  return s;
}

inline nlohmann::json to_json(const CorpusStats& s) {
  return {{"size", s.size},
          {"avg_dialogue_len", s.avg_dialogue_len},
          {"avg_turns", s.avg_turns},
          {"avg_summary_len", s.avg_summary_len},
          {"summaries", s.summaries},
          {"avg_domains_per_dialogue", s.avg_domains_per_dialogue},
          {"avg_intents_per_dialogue", s.avg_intents_per_dialogue},
          {"avg_slots_per_dialogue", s.avg_slots_per_dialogue},
          {"avg_unique_slot_names_per_dialogue",
           s.avg_unique_slot_names_per_dialogue}};
}

}  // namespace todsum
