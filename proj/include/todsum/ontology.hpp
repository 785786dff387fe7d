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

// Task ontology: domains, intents, slots, value vocabularies, aliases and the
// cue phrases used by the tuple extractor.
//
// File layout (one JSON document):
//
//   {"domains": {
//     "<domain>": {
//       "intents": {"<intent>": {"slots": ["<slot>", ...]}, ...},
//       "slots":   ["<slot>", ...],              // optional shared list
//       "values":  {"<slot>": ["<value>", ...] | "open", ...},
//       "aliases": {"<slot>": {"<surface>": "<value>", ...}, ...},
//       "extraction": {
//         "cues":        ["<domain synonym>", ...],
//         "intent_cues": {"<intent>": ["<phrase>", ...]},
//         "slot_cues":   {"<slot>": ["<phrase>", ...]},
//         "templates":   {"<intent>": "<sentence prefix>"}
//       }}}}
//
// An intent without its own "slots" list uses the domain-level "slots" list.

#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "todsum/error.hpp"
#include "todsum/state.hpp"
#include "todsum/text.hpp"

namespace todsum {

struct SlotSchema {
  std::string name;
  bool open = false;
  std::vector<std::string> values;  // canonical values in file order
  std::vector<std::string> cues;    // lowercased cue phrases
  // folded surface -> canonical value, for values and aliases respectively
  std::map<std::string, std::string> value_index;
  std::map<std::string, std::string> alias_index;
  // unit words accepted after a number ("4-star", "2 people")
  std::set<std::string> units;
};

struct IntentSchema {
  std::string name;
  std::vector<std::string> slots;
  std::vector<std::string> cues;
  std::optional<std::string> render_template;
};

struct DomainSchema {
  std::string name;
  std::vector<std::string> cues;  // always includes the domain name
  std::map<std::string, IntentSchema> intents;
  std::map<std::string, SlotSchema> slots;

  bool intent_has_slot(const std::string& intent,
                       const std::string& slot) const {
    auto it = intents.find(intent);
    if (it == intents.end()) return false;
    const auto& s = it->second.slots;
    return std::find(s.begin(), s.end(), slot) != s.end();
  }
};

namespace detail {

// Case, whitespace and number-word folding used for every vocabulary lookup.
inline std::string fold_surface(std::string_view surface) {
  std::vector<std::string> parts = text::split_whitespace(text::to_lower(surface));
  for (auto& p : parts) p = text::fold_number_words_in_token(p);
  return text::join(parts, " ");
}

inline std::set<std::string> unit_variants(const std::vector<std::string>& cues,
                                           const std::string& slot_name) {
  std::set<std::string> out;
  std::vector<std::string> bases = cues;
  std::string spaced = slot_name;
  std::replace(spaced.begin(), spaced.end(), '_', ' ');
  bases.push_back(spaced);
  for (const auto& b : bases) {
    std::string f = fold_surface(b);
    if (f.empty()) continue;
    out.insert(f);
    if (f.back() == 's') {
      out.insert(f.substr(0, f.size() - 1));
    } else {
      out.insert(f + "s");
    }
  }
  return out;
}

inline std::vector<std::string> lowered_list(const nlohmann::json& j,
                                             const std::string& where) {
  if (!j.is_array()) throw ValidationError(where + ": expected an array");
  std::vector<std::string> out;
  for (const auto& e : j) {
    if (!e.is_string() || text::is_blank(e.get<std::string>())) {
      throw ValidationError(where + ": expected non-empty strings");
    }
    out.push_back(text::collapse_whitespace(text::to_lower(e.get<std::string>())));
  }
  return out;
}

}  // namespace detail

class Ontology {
 public:
  Ontology() = default;

  static Ontology from_json(const nlohmann::json& doc);

  const std::map<std::string, DomainSchema>& domains() const noexcept {
    return domains_;
  }

  bool has_domain(const std::string& d) const { return domains_.count(d) > 0; }

  const DomainSchema* find_domain(const std::string& d) const {
    auto it = domains_.find(d);
    return it == domains_.end() ? nullptr : &it->second;
  }

  const SlotSchema* find_slot(const std::string& domain,
                              const std::string& slot) const {
    const DomainSchema* d = find_domain(domain);
    if (d == nullptr) return nullptr;
    auto it = d->slots.find(slot);
    return it == d->slots.end() ? nullptr : &it->second;
  }

  // Maps a surface form to the slot's canonical value. Lowercasing,
  // whitespace collapsing, number-word folding ("four" -> "4") and unit
  // suffixes ("4-star", "4 stars") are folded before lookup. Open-valued
  // slots return the cleaned surface. Throws on an unknown (domain, slot).
  std::optional<std::string> normalize_value(const std::string& domain,
                                             const std::string& slot,
                                             std::string_view surface) const {
    const SlotSchema* s = find_slot(domain, slot);
    if (s == nullptr) {
      throw Error("unknown (domain, slot) pair: (" + domain + ", " + slot + ")");
    }
    return normalize_value(*s, surface);
  }

  static std::optional<std::string> normalize_value(const SlotSchema& s,
                                                    std::string_view surface) {
    std::string cleaned = text::collapse_whitespace(text::to_lower(surface));
    if (cleaned.empty()) return std::nullopt;
    std::string key = detail::fold_surface(cleaned);
    if (auto it = s.alias_index.find(key); it != s.alias_index.end()) {
      return it->second;
    }
    if (auto it = s.value_index.find(key); it != s.value_index.end()) {
      return it->second;
    }
    if (auto number = strip_unit(s, key)) {
      if (auto it = s.value_index.find(*number); it != s.value_index.end()) {
        return it->second;
      }
    }
    if (s.open) return cleaned;
    return std::nullopt;
  }

  // Empty when the tuple is legal; otherwise one message per problem, the
  // first unknown name short-circuiting the rest.
  std::optional<std::string> check_tuple(const StateTuple& t) const {
    const DomainSchema* d = find_domain(t.domain);
    if (d == nullptr) return "unknown domain \"" + t.domain + "\"";
    if (d->intents.count(t.intent) == 0) {
      return "unknown intent \"" + t.intent + "\" in domain \"" + t.domain +
             "\"";
    }
    if (!d->intent_has_slot(t.intent, t.slot)) {
      return "unknown slot \"" + t.slot + "\" for (" + t.domain + ", " +
             t.intent + ")";
    }
    if (!normalize_value(d->slots.at(t.slot), t.value)) {
      return "value \"" + t.value + "\" not legal for slot \"" + t.slot +
             "\" in domain \"" + t.domain + "\"";
    }
    return std::nullopt;
  }

  // Returns the tuple with its value canonicalized, or nullopt if illegal.
  std::optional<StateTuple> canonicalize(const StateTuple& t) const {
    if (check_tuple(t)) return std::nullopt;
    StateTuple out = t;
    out.value = *normalize_value(domains_.at(t.domain).slots.at(t.slot), t.value);
    return out;
  }

  // Every legal tuple over closed-valued slots, in canonical order.
  std::vector<StateTuple> closed_tuple_universe() const {
    std::vector<StateTuple> out;
    for (const auto& [dname, d] : domains_) {
      for (const auto& [iname, intent] : d.intents) {
        for (const auto& sname : intent.slots) {
          const SlotSchema& s = d.slots.at(sname);
          if (s.open) continue;
          for (const auto& v : s.values) out.push_back({dname, iname, sname, v});
        }
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  static std::optional<std::string> strip_unit(const SlotSchema& s,
                                               const std::string& key) {
    std::size_t i = 0;
    while (i < key.size() && key[i] >= '0' && key[i] <= '9') ++i;
    if (i == 0 || i + 1 >= key.size()) return std::nullopt;
    if (key[i] != '-' && key[i] != ' ') return std::nullopt;
    if (s.units.count(key.substr(i + 1)) == 0) return std::nullopt;
    return key.substr(0, i);
  }

  std::map<std::string, DomainSchema> domains_;
};

inline Ontology Ontology::from_json(const nlohmann::json& doc) {
  using nlohmann::json;
  if (!doc.is_object() || !doc.contains("domains") ||
      !doc["domains"].is_object()) {
    throw ValidationError("ontology: missing \"domains\" object");
  }
  Ontology onto;
  for (const auto& [dname, dj] : doc["domains"].items()) {
    const std::string where = "ontology domain \"" + dname + "\"";
    if (!dj.is_object()) throw ValidationError(where + ": expected an object");
    DomainSchema d;
    d.name = dname;
    const json empty = json::object();
    const json& extraction = dj.contains("extraction") ? dj["extraction"] : empty;

    // Values first: every other section refers to slots declared here.
    if (!dj.contains("values") || !dj["values"].is_object()) {
      throw ValidationError(where + ": missing \"values\" object");
    }
    for (const auto& [sname, vj] : dj["values"].items()) {
      SlotSchema s;
      s.name = sname;
      if (vj.is_string() && vj.get<std::string>() == "open") {
        s.open = true;
      } else if (vj.is_array() && !vj.empty()) {
        for (const auto& v : vj) {
          if (!v.is_string() || text::is_blank(v.get<std::string>())) {
            throw ValidationError(where + ", slot \"" + sname +
                                  "\": values must be non-empty strings");
          }
          std::string canon = text::collapse_whitespace(v.get<std::string>());
          std::string key = detail::fold_surface(canon);
          auto [it, fresh] = s.value_index.emplace(key, canon);
          if (!fresh && it->second != canon) {
            throw ValidationError(where + ", slot \"" + sname + "\": values \"" +
                                  it->second + "\" and \"" + canon +
                                  "\" collide after normalization");
          }
          if (fresh) s.values.push_back(canon);
        }
      } else {
        throw ValidationError(where + ", slot \"" + sname +
                              "\": values must be a non-empty list or \"open\"");
      }
      d.slots.emplace(sname, std::move(s));
    }

    if (extraction.contains("slot_cues")) {
      for (const auto& [sname, cj] : extraction["slot_cues"].items()) {
        auto it = d.slots.find(sname);
        if (it == d.slots.end()) {
          throw ValidationError(where + ": slot_cues entry for undeclared slot \"" +
                                sname + "\"");
        }
        it->second.cues = detail::lowered_list(cj, where + ", slot_cues." + sname);
      }
    }
    for (auto& [sname, s] : d.slots) s.units = detail::unit_variants(s.cues, sname);

    if (dj.contains("aliases")) {
      for (const auto& [sname, aj] : dj["aliases"].items()) {
        auto it = d.slots.find(sname);
        if (it == d.slots.end()) {
          throw ValidationError(where + ": aliases for undeclared slot \"" +
                                sname + "\"");
        }
        SlotSchema& s = it->second;
        for (const auto& [surface, target] : aj.items()) {
          if (!target.is_string()) {
            throw ValidationError(where + ", alias \"" + surface +
                                  "\": target must be a string");
          }
          std::string canon = text::collapse_whitespace(target.get<std::string>());
          if (!s.open) {
            auto vit = s.value_index.find(detail::fold_surface(canon));
            if (vit == s.value_index.end() || vit->second != canon) {
              throw ValidationError(where + ", slot \"" + sname + "\": alias \"" +
                                    surface + "\" points to unknown value \"" +
                                    canon + "\"");
            }
          }
          const std::string key = detail::fold_surface(surface);
          if (auto vit = s.value_index.find(key);
              vit != s.value_index.end() && vit->second != canon) {
            throw ValidationError(where + ", slot \"" + sname + "\": alias \"" +
                                  surface + "\" shadows value \"" + vit->second +
                                  "\"");
          }
          s.alias_index[key] = canon;
        }
      }
    }

    std::vector<std::string> shared_slots;
    if (dj.contains("slots")) shared_slots = detail::lowered_list(dj["slots"], where + ".slots");
    if (!dj.contains("intents") || !dj["intents"].is_object() ||
        dj["intents"].empty()) {
      throw ValidationError(where + ": missing or empty \"intents\" object");
    }
    for (const auto& [iname, ij] : dj["intents"].items()) {
      IntentSchema intent;
      intent.name = iname;
      if (ij.is_object() && ij.contains("slots")) {
        for (const auto& sj : ij["slots"]) {
          if (!sj.is_string()) {
            throw ValidationError(where + ", intent \"" + iname +
                                  "\": slot names must be strings");
          }
          intent.slots.push_back(sj.get<std::string>());
        }
      } else {
        intent.slots = shared_slots;
      }
      if (intent.slots.empty()) {
        throw ValidationError(where + ", intent \"" + iname + "\": no slots");
      }
      for (const auto& sname : intent.slots) {
        if (d.slots.count(sname) == 0) {
          throw ValidationError(where + ", intent \"" + iname +
                                "\": slot \"" + sname + "\" has no values entry");
        }
      }
      std::sort(intent.slots.begin(), intent.slots.end());
      intent.slots.erase(std::unique(intent.slots.begin(), intent.slots.end()),
                         intent.slots.end());
      d.intents.emplace(iname, std::move(intent));
    }

    d.cues.push_back(text::to_lower(dname));
    if (extraction.contains("cues")) {
      for (auto& c : detail::lowered_list(extraction["cues"], where + ".extraction.cues")) {
        if (std::find(d.cues.begin(), d.cues.end(), c) == d.cues.end()) {
          d.cues.push_back(std::move(c));
        }
      }
    }
    if (extraction.contains("intent_cues")) {
      for (const auto& [iname, cj] : extraction["intent_cues"].items()) {
        auto it = d.intents.find(iname);
        if (it == d.intents.end()) {
          throw ValidationError(where + ": intent_cues for unknown intent \"" +
                                iname + "\"");
        }
        it->second.cues = detail::lowered_list(cj, where + ".intent_cues." + iname);
      }
    }
    if (extraction.contains("templates")) {
      for (const auto& [iname, tj] : extraction["templates"].items()) {
        auto it = d.intents.find(iname);
        if (it == d.intents.end()) {
          throw ValidationError(where + ": template for unknown intent \"" +
                                iname + "\"");
        }
        if (!tj.is_string()) {
          throw ValidationError(where + ": template for \"" + iname +
                                "\" must be a string");
        }
        it->second.render_template = tj.get<std::string>();
      }
    }
    onto.domains_.emplace(dname, std::move(d));
  }
  return onto;
}

inline Ontology load_ontology(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open ontology file: " + path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("ontology " + path + ": " + e.what(), e.byte);
  }
  return Ontology::from_json(doc);
}

}  // namespace todsum
