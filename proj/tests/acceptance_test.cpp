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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Set TODSUM_CORPUS to a colon-separated list of JSONL files with
// the full corpus to run the corpus-statistics check on real data.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "support/process.hpp"
#include "support/test_support.hpp"
#include "todsum/todsum.hpp"

namespace {

using namespace todsum;
using testing::StateGenerator;
using testing::data_path;
using testing::fixture_ontology;
using testing::run_cli;
namespace oracle = testing::oracle;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// 1. Factual identities over random state pairs.
Outcome factual_identities() {
  StateGenerator gen(fixture_ontology(), 1001);
  const auto t0 = Clock::now();
  std::size_t failures = 0;
  const int pairs = 1000;
  if (factual_prf({}, {}).f1 != 1.0) ++failures;
  for (int i = 0; i < pairs; ++i) {
    DialogueState tgt = gen.random_state();
    DialogueState hyp = gen.perturbed(tgt);
    FactualScore f = factual_prf(hyp, tgt);
    FactualScore g = factual_prf(tgt, hyp);
    if (g.precision != f.recall || g.recall != f.precision || g.f1 != f.f1) ++failures;
    FactualScore self = factual_prf(tgt, tgt);
    if (self.precision != 1.0 || self.recall != 1.0 || self.f1 != 1.0) ++failures;
    StateTuple extra = gen.random_tuple();
    if (!hyp.contains(extra)) {
      DialogueState grown = hyp;
      grown.insert(extra);
      FactualScore after = factual_prf(grown, tgt);
      if (tgt.contains(extra)) {
        if (after.precision < f.precision || after.recall < f.recall || after.f1 < f.f1) ++failures;
      } else if (after.precision > f.precision) {
        ++failures;
      }
    }
  }
  const double secs = seconds_since(t0);
  std::ostringstream d;
  d << pairs << " pairs, " << failures << " failures, " << secs << " s (limit 5 s)";
  return {failures == 0 && secs < 5.0, d.str()};
}

// 2. Worked example: 3 hypothesis tuples, 4 target tuples, 2 shared.
Outcome worked_example() {
  DialogueState tgt, hyp;
  tgt.insert({"hotel", "book_hotel", "stars", "4"});
  tgt.insert({"hotel", "book_hotel", "price", "cheap"});
  tgt.insert({"hotel", "book_hotel", "area", "north"});
  tgt.insert({"hotel", "book_hotel", "people", "2"});
  hyp.insert({"hotel", "book_hotel", "stars", "4"});
  hyp.insert({"hotel", "book_hotel", "price", "cheap"});
  hyp.insert({"taxi", "book_taxi", "leave_at", "17:30"});
  FactualScore f = factual_prf(hyp, tgt);
  std::ostringstream d;
  d.precision(10);
  d << "P=" << f.precision << " R=" << f.recall << " F1=" << f.f1;
  const bool ok = std::abs(f.precision - 0.6667) <= 1e-4 && std::abs(f.recall - 0.5) <= 1e-9 &&
                  std::abs(f.f1 - 0.5714) <= 1e-4 &&
                  std::abs(f.precision - 2.0 / 3.0) <= 1e-9 && std::abs(f.f1 - 4.0 / 7.0) <= 1e-9;
  return {ok, d.str()};
}

// 3. ROUGE against brute-force oracles.
Outcome rouge_oracles() {
  StateGenerator gen(fixture_ontology(), 1003);
  const auto t0 = Clock::now();
  std::size_t failures = 0;
  const int lists = 200;
  for (int i = 0; i < lists; ++i) {
    auto a = gen.random_tokens(10, 4);
    auto b = gen.random_tokens(10, 4);
    if (rouge_l(a, b).overlap != oracle::brute_lcs(a, b)) ++failures;
    for (std::size_t n : {1u, 2u}) {
      if (rouge_n(a, b, static_cast<int>(n)).overlap != oracle::clipped_overlap(a, b, n)) ++failures;
    }
  }
  const double secs = seconds_since(t0);
  std::ostringstream d;
  d << lists << " list pairs, " << failures << " mismatches, " << secs << " s (limit 10 s)";
  return {failures == 0 && secs < 10.0, d.str()};
}

// 4. Closed-loop extraction.
Outcome closed_loop() {
  StateGenerator gen(fixture_ontology(), 1004);
  const TupleExtractor ex(fixture_ontology());
  const auto t0 = Clock::now();
  const int states = 500;
  int exact = 0;
  for (int i = 0; i < states; ++i) {
    DialogueState s = gen.random_state();
    if (ex(render_reference_summary(s, fixture_ontology())).tuples == s) ++exact;
  }
  const double secs = seconds_since(t0);
  const double rate = static_cast<double>(exact) / states;
  std::ostringstream d;
  d << exact << "/" << states << " exact (" << 100.0 * rate << "%, need 99%), " << secs
    << " s (limit 10 s)";
  return {rate >= 0.99 && secs < 10.0, d.str()};
}

// 5. Noise calibration and seeded determinism.
Outcome noise_calibration() {
  StateGenerator gen(fixture_ontology(), 1005);
  const auto universe = fixture_ontology().closed_tuple_universe();
  std::size_t out_of_band = 0, nondeterministic = 0, runs = 0;
  double worst = 0.0;
  for (double target : {0.3, 0.5, 0.7, 0.9}) {
    for (int run = 0; run < 100; ++run, ++runs) {
      DialogueState gold = gen.random_state();
      NoiseSpec spec;
      spec.target_accuracy = target;
      spec.seed = derive_seed(static_cast<std::uint64_t>(run), "acceptance");
      NoiseOutcome a = inject_noise_detailed(gold, spec, fixture_ontology(), universe);
      NoiseOutcome b = inject_noise_detailed(gold, spec, fixture_ontology(), universe);
      const double gap = std::abs(a.accuracy - target) * static_cast<double>(gold.size());
      worst = std::max(worst, gap);
      if (gap > 1.0) ++out_of_band;
      if (serialize_state(a.state) != serialize_state(b.state)) ++nondeterministic;
    }
  }
  std::ostringstream d;
  d << runs << " runs, " << out_of_band << " outside 1/n (worst " << worst << "/n), "
    << nondeterministic << " nondeterministic";
  return {out_of_band == 0 && nondeterministic == 0, d.str()};
}

// 6. Greedy oracle lower bound.
Outcome greedy_oracle_bound() {
  StateGenerator gen(fixture_ontology(), 1006);
  const Tokenizer tok;
  std::size_t failures = 0;
  double slowest = 0.0;
  const int dialogues = 100;
  for (int i = 0; i < dialogues; ++i) {
    Dialogue d = gen.random_dialogue("g" + std::to_string(i), 8);
    const auto t0 = Clock::now();
    ExtractiveSummary s = greedy_oracle(d, *d.summary, tok);
    slowest = std::max(slowest, seconds_since(t0));
    const auto ref = tok(*d.summary);
    double best = 0.0;
    for (const auto& u : d.turns) best = std::max(best, rouge_n(tok(u.text), ref, 2).f);
    if (s.score < best) ++failures;
  }
  std::ostringstream d;
  d << dialogues << " dialogues, " << failures << " below best single utterance, slowest "
    << slowest << " s (limit 1 s)";
  return {failures == 0 && slowest < 1.0, d.str()};
}

// 7. Error-type accounting.
Outcome error_accounting() {
  StateGenerator gen(fixture_ontology(), 1007);
  std::size_t failures = 0;
  const int pairs = 500;
  for (int i = 0; i < pairs; ++i) {
    DialogueState tgt = gen.random_state();
    DialogueState hyp = gen.perturbed(tgt, 6);
    ErrorProfile p = classify_errors(hyp, tgt);
    const std::size_t hyp_only = set_difference(hyp, tgt).size();
    const std::size_t tgt_only = set_difference(tgt, hyp).size();
    const bool hyp_side = p[ErrorType::kDomain] + p[ErrorType::kIntent] +
                              p[ErrorType::kSlotValue] + p[ErrorType::kSlotRedundancy] ==
                          hyp_only;
    const bool tgt_side = p[ErrorType::kSlotValue] + p[ErrorType::kSlotMissing] == tgt_only;
    if (!hyp_side || !tgt_side) ++failures;
  }
  DialogueState three, four;
  three.insert({"hotel", "book_hotel", "stars", "3"});
  four.insert({"hotel", "book_hotel", "stars", "4"});
  ErrorProfile star = classify_errors(three, four);
  const bool star_ok = star[ErrorType::kSlotValue] == 1 && star.total() == 1;
  std::ostringstream d;
  d << pairs << " pairs, " << failures << " accounting failures; 3-star vs 4-star -> "
    << star[ErrorType::kSlotValue] << " slot_value_error of " << star.total() << " total";
  return {failures == 0 && star_ok, d.str()};
}

// 8. Corpus statistics through the CLI.
Outcome corpus_statistics() {
  const char* env = std::getenv("TODSUM_CORPUS");
  if (env != nullptr && *env != '\0') {
    std::string args = "stats";
    std::stringstream paths(env);
    std::string path;
    while (std::getline(paths, path, ':')) {
      if (!path.empty()) args += " --input '" + path + "'";
    }
    auto r = run_cli(args);
    if (r.exit_code != 0) return {false, "stats exited with " + std::to_string(r.exit_code)};
    nlohmann::json j = nlohmann::json::parse(r.out);
    auto within = [](double got, double want) { return std::abs(got - want) <= 0.05 * want; };
    const double dl = j["avg_dialogue_len"], tu = j["avg_turns"], sl = j["avg_summary_len"];
    std::ostringstream d;
    d << "TODSUM_CORPUS: size=" << j["size"] << " dialogue_len=" << dl << " turns=" << tu
      << " summary_len=" << sl;
    return {j["size"] == 9906 && within(dl, 186.9) && within(tu, 14.1) && within(sl, 45.4),
            d.str()};
  }
  auto r = run_cli("stats --input " + data_path("fixture20.jsonl") + " --ontology " +
                   data_path("ontology.json"));
  if (r.exit_code != 0) return {false, "stats exited with " + std::to_string(r.exit_code)};
  nlohmann::json j = nlohmann::json::parse(r.out);
  // Hand totals over the fixture: 1426 tokens, 156 turns, 569 summary tokens.
  const bool ok = j["size"] == 20 && j["avg_dialogue_len"].get<double>() == 1426.0 / 20.0 &&
                  j["avg_turns"].get<double>() == 156.0 / 20.0 &&
                  j["avg_summary_len"].get<double>() == 569.0 / 20.0;
  std::ostringstream d;
  d << "external corpus absent (TODSUM_CORPUS unset); 20-dialogue fixture: size=" << j["size"]
    << " dialogue_len=" << j["avg_dialogue_len"] << " turns=" << j["avg_turns"]
    << " summary_len=" << j["avg_summary_len"];
  return {ok, d.str()};
}

// 9. End-to-end: oracle baseline piped into evaluate.
Outcome end_to_end() {
  const std::string gold = data_path("fixture50.jsonl");
  const auto t0 = Clock::now();
  auto r = run_cli("baseline --method oracle --gold " + gold + " | " +
                   std::string(TODSUM_CLI_PATH) + " evaluate --gold " + gold +
                   " --pred - --ontology " + data_path("ontology.json"));
  const double secs = seconds_since(t0);
  if (r.exit_code != 0) return {false, "pipeline exited with " + std::to_string(r.exit_code)};
  nlohmann::json j = nlohmann::json::parse(r.out, nullptr, false);
  if (j.is_discarded()) return {false, "report is not JSON"};
  auto problems = check_report_schema(j);
  const bool echoed = j["config"]["conventions"] == conventions_json() &&
                      j["config"]["tokenizer"].size() == 4;
  std::ostringstream d;
  d << "samples=" << j["samples"] << ", " << problems.size() << " schema problems, conventions "
    << (echoed ? "echoed" : "missing") << ", " << secs << " s (limit 30 s)";
  for (const auto& p : problems) d << "\n      " << p;
  return {problems.empty() && echoed && j["samples"] == 50 && secs < 30.0, d.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"1 factual metric identities", factual_identities},
      {"2 worked factual example", worked_example},
      {"3 ROUGE oracle equivalence", rouge_oracles},
      {"4 closed-loop extraction", closed_loop},
      {"5 noise calibration", noise_calibration},
      {"6 greedy oracle bound", greedy_oracle_bound},
      {"7 error-type accounting", error_accounting},
      {"8 corpus statistics", corpus_statistics},
      {"9 end-to-end evaluate", end_to_end},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
