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

#include "todsum/corpus.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "support/test_support.hpp"
#include "todsum/error.hpp"

namespace todsum {
namespace {

using testing::data_path;
using testing::fixture_ontology;

std::string record(const std::string& id, const std::string& state_json,
                   const std::string& extra = "") {
  return R"({"id": ")" + id +
         R"(", "turns": [{"speaker": "user", "text": "I need a hotel."}, )"
         R"({"speaker": "system", "text": "Sure."}], "state": )" +
         state_json + extra + "}\n";
}

const char* kStars4 = R"([{"domain": "hotel", "intent": "book_hotel", "slot": "stars", "value": "4"}])";

TEST(ReadCorpusTest, KeepsFileOrder) {
  std::istringstream in(record("c", kStars4) + record("a", "[]") + "\n" + record("b", kStars4));
  auto corpus = load_corpus(in, fixture_ontology());
  ASSERT_EQ(corpus.size(), 3u);
  EXPECT_EQ(corpus[0].id, "c");
  EXPECT_EQ(corpus[1].id, "a");
  EXPECT_EQ(corpus[2].id, "b");
  EXPECT_EQ(corpus[0].domains, (std::set<std::string>{"hotel"}));
  EXPECT_EQ(corpus[0].turns[1].speaker, Speaker::kSystem);
}

TEST(ReadCorpusTest, EmptyFileIsEmptyCorpus) {
  std::istringstream in("");
  EXPECT_TRUE(load_corpus(in, fixture_ontology()).empty());
}

TEST(ReadCorpusTest, UnknownSlotNamesTheSlot) {
  std::istringstream in(record(
      "x", R"([{"domain": "hotel", "intent": "book_hotel", "slot": "colour", "value": "red"}])"));
  try {
    load_corpus(in, fixture_ontology());
    FAIL() << "expected a validation error";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("colour"), std::string::npos);
  }
}

TEST(ReadCorpusTest, StructuralErrors) {
  std::istringstream dup(record("a", "[]") + record("a", "[]"));
  EXPECT_THROW(read_corpus(dup), ParseError);
  std::istringstream bad_json("{not json\n");
  EXPECT_THROW(read_corpus(bad_json), ParseError);
  std::istringstream no_turns(R"({"id": "a", "state": []})" "\n");
  EXPECT_THROW(read_corpus(no_turns), ParseError);
  std::istringstream bad_speaker(
      R"({"id": "a", "turns": [{"speaker": "robot", "text": "hi"}], "state": []})" "\n");
  EXPECT_THROW(read_corpus(bad_speaker), ParseError);
  EXPECT_THROW(read_corpus(std::string("/nonexistent/corpus.jsonl")), Error);
}

TEST(ReadCorpusTest, AcceptsSerializedStateString) {
  std::istringstream in(record("s", R"x("hotel book_hotel(price=inexpensive ;stars=4-star)")x"));
  auto corpus = load_corpus(in, fixture_ontology());
  ASSERT_EQ(corpus.size(), 1u);
  EXPECT_TRUE(corpus[0].state.contains({"hotel", "book_hotel", "price", "cheap"}));
  EXPECT_TRUE(corpus[0].state.contains({"hotel", "book_hotel", "stars", "4"}));
}

TEST(ValidateDialogueTest, ListedValueIsValid) {
  Dialogue d;
  d.id = "ok";
  d.turns = {{Speaker::kUser, "hello"}};
  d.state.insert({"hotel", "book_hotel", "stars", "4"});
  d.domains = {"hotel"};
  EXPECT_TRUE(validate_dialogue(d, fixture_ontology()).empty());
}

TEST(ValidateDialogueTest, OutOfVocabularyValue) {
  Dialogue d;
  d.id = "bad";
  d.turns = {{Speaker::kUser, "hello"}};
  d.state.insert({"hotel", "book_hotel", "stars", "11"});
  d.domains = {"hotel"};
  auto v = validate_dialogue(d, fixture_ontology());
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].field, "state[0]");
  EXPECT_NE(v[0].message.find("11"), std::string::npos);
}

TEST(ValidateDialogueTest, UnknownDomain) {
  Dialogue d;
  d.id = "bad";
  d.turns = {{Speaker::kUser, "hello"}};
  d.state.insert({"spaceport", "book", "gate", "7"});
  d.domains = {"spaceport"};
  auto v = validate_dialogue(d, fixture_ontology());
  ASSERT_EQ(v.size(), 1u);
  EXPECT_NE(v[0].message.find("spaceport"), std::string::npos);
}

TEST(ValidateDialogueTest, EachViolationCitesOneField) {
  Dialogue d;
  d.id = "many";
  d.turns = {{Speaker::kUser, " "}};
  d.state.insert({"hotel", "book_hotel", "stars", "11"});
  d.state.insert({"hotel", "book_hotel", "colour", "red"});
  d.domains = {"hotel", "taxi"};
  d.summary = "";
  auto v = validate_dialogue(d, fixture_ontology());
  std::vector<std::string> fields;
  for (const auto& x : v) fields.push_back(x.field);
  EXPECT_EQ(fields, (std::vector<std::string>{"turns[0].text", "state[0]", "state[1]",
                                              "domains", "summary"}));
}

TEST(SaveCorpusTest, LoadSaveIsIdentityOnCanonicalForm) {
  const Ontology& o = fixture_ontology();
  auto corpus = load_corpus(data_path("fixture20.jsonl"), o);
  std::ostringstream first;
  save_corpus(first, corpus);
  std::istringstream in(first.str());
  auto again = load_corpus(in, o);
  std::ostringstream second;
  save_corpus(second, again);
  EXPECT_EQ(first.str(), second.str());
  ASSERT_EQ(again.size(), corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    EXPECT_EQ(again[i].state, corpus[i].state);
    EXPECT_EQ(again[i].summary, corpus[i].summary);
  }
}

TEST(PredictionsTest, ReadsSummaryAndState) {
  std::istringstream in(
      R"x({"id": "a", "summary": "x", "state": "hotel book_hotel(stars=four)"})x" "\n"
      R"({"id": "b", "summary": "y"})" "\n");
  auto p = read_predictions(in, &fixture_ontology());
  ASSERT_EQ(p.size(), 2u);
  ASSERT_TRUE(p[0].state);
  EXPECT_TRUE(p[0].state->contains({"hotel", "book_hotel", "stars", "4"}));
  EXPECT_FALSE(p[1].state);
  std::istringstream dup(R"({"id": "a"})" "\n" R"({"id": "a"})" "\n");
  EXPECT_THROW(read_predictions(dup), ParseError);
}

TEST(CorpusStatsTest, SingleDialogue) {
  Dialogue d;
  d.id = "one";
  d.turns = {{Speaker::kUser, "I need a cheap hotel."}, {Speaker::kSystem, "For how many nights, please?"}};
  d.summary = "The user books a cheap hotel today.";
  CorpusStats s = corpus_stats({d});
  EXPECT_EQ(s.size, 1u);
  EXPECT_DOUBLE_EQ(s.avg_dialogue_len, 10.0);
  EXPECT_DOUBLE_EQ(s.avg_turns, 2.0);
  EXPECT_DOUBLE_EQ(s.avg_summary_len, 7.0);
}

TEST(CorpusStatsTest, DomainMeanAndSlotVariants) {
  Dialogue a;
  a.id = "a";
  a.turns = {{Speaker::kUser, "hi"}};
  a.state.insert({"hotel", "book_hotel", "area", "north"});
  a.domains = a.state.domains();
  Dialogue b;
  b.id = "b";
  b.turns = {{Speaker::kUser, "hi"}};
  b.state.insert({"hotel", "book_hotel", "area", "north"});
  b.state.insert({"restaurant", "book_restaurant", "area", "north"});
  b.state.insert({"attraction", "find_attraction", "area", "north"});
  b.domains = b.state.domains();
  CorpusStats s = corpus_stats({a, b});
  EXPECT_DOUBLE_EQ(s.avg_domains_per_dialogue, 2.0);
  EXPECT_DOUBLE_EQ(s.avg_slots_per_dialogue, 2.0);
  EXPECT_DOUBLE_EQ(s.avg_unique_slot_names_per_dialogue, 1.0);
  EXPECT_EQ(s.summaries, 0u);
  EXPECT_DOUBLE_EQ(s.avg_summary_len, 0.0);
}

TEST(CorpusStatsTest, TwentyDialogueFixture) {
  // Totals from an independent script over the same file.
  CorpusStats s = corpus_stats(load_corpus(data_path("fixture20.jsonl"), fixture_ontology()));
  EXPECT_EQ(s.size, 20u);
  EXPECT_EQ(s.avg_dialogue_len, 1426.0 / 20.0);
  EXPECT_EQ(s.avg_turns, 156.0 / 20.0);
  EXPECT_EQ(s.avg_summary_len, 569.0 / 20.0);
  EXPECT_EQ(s.avg_domains_per_dialogue, 32.0 / 20.0);
  EXPECT_EQ(s.avg_intents_per_dialogue, 32.0 / 20.0);
  EXPECT_EQ(s.avg_slots_per_dialogue, 148.0 / 20.0);
  EXPECT_EQ(s.avg_unique_slot_names_per_dialogue, 125.0 / 20.0);
}

TEST(CorpusStatsTest, PermutationInvariant) {
  auto corpus = load_corpus(data_path("fixture50.jsonl"), fixture_ontology());
  const nlohmann::json base = to_json(corpus_stats(corpus));
  std::mt19937 rng(3);
  for (int i = 0; i < 10; ++i) {
    std::shuffle(corpus.begin(), corpus.end(), rng);
    EXPECT_EQ(to_json(corpus_stats(corpus)).dump(), base.dump());
  }
}

TEST(CorpusStatsTest, EmptyCorpusThrows) {
  EXPECT_THROW(corpus_stats({}), Error);
}

}  // namespace
}  // namespace todsum
