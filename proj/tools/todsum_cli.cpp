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

// Command-line front end. Exit codes: 0 success, 1 usage, 2 data error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "todsum/todsum.hpp"

namespace {

using nlohmann::json;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

// "-" means stdin / stdout.
class Input {
 public:
  explicit Input(const std::string& path) {
    if (path == "-") return;
    file_.open(path);
    if (!file_) throw todsum::Error("cannot open file: " + path);
  }
  std::istream& stream() { return file_.is_open() ? file_ : std::cin; }

 private:
  std::ifstream file_;
};

class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_.open(path);
    if (!file_) throw todsum::Error("cannot write file: " + path);
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

std::vector<todsum::Dialogue> read_gold(const std::string& path,
                                        const todsum::Ontology* ontology) {
  Input in(path);
  return ontology ? todsum::load_corpus(in.stream(), *ontology)
                  : todsum::read_corpus(in.stream());
}

std::vector<todsum::Prediction> read_preds(const std::string& path,
                                           const todsum::Ontology* ontology) {
  Input in(path);
  return todsum::read_predictions(in.stream(), ontology);
}

struct TokenizerFlags {
  bool keep_case = false;
  bool keep_punct = false;
  bool fold_numbers = false;
  bool stem = false;

  void attach(CLI::App* app) {
    app->add_flag("--keep-case", keep_case, "Do not lowercase tokens");
    app->add_flag("--keep-punct", keep_punct, "Do not strip edge punctuation");
    app->add_flag("--fold-number-words", fold_numbers, "Map number words to digits");
    app->add_flag("--stem", stem, "Apply the Porter stemmer");
  }

  todsum::TokenizerOptions options() const {
    todsum::TokenizerOptions o;
    o.lowercase = !keep_case;
    o.strip_punctuation = !keep_punct;
    o.fold_number_words = fold_numbers;
    o.stem = stem;
    return o;
  }
};

json prf(const todsum::RougeScore& s) {
  return {{"precision", s.precision}, {"recall", s.recall}, {"f", s.f}};
}

// ---------------------------------------------------------------- evaluate

struct EvaluateArgs {
  std::string gold, pred, ontology, out, per_sample;
  std::string channel = "extract";
  std::size_t workers = 1;
  TokenizerFlags tok;
};

int run_evaluate(const EvaluateArgs& a) {
  const todsum::Ontology ontology = todsum::load_ontology(a.ontology);
  todsum::EvaluateOptions opt;
  opt.tokenizer = a.tok.options();
  opt.channel = a.channel == "pred-file" ? todsum::StateChannel::kPredFile
                                         : todsum::StateChannel::kExtract;
  opt.workers = a.workers;
  opt.gold_path = a.gold;
  opt.predictions_path = a.pred;
  opt.ontology_path = a.ontology;
  const auto gold = read_gold(a.gold, &ontology);
  const auto preds = read_preds(a.pred, &ontology);
  const todsum::EvaluationReport report = todsum::evaluate(gold, preds, ontology, opt);
  Output out(a.out);
  out.stream() << todsum::to_json(report).dump(2) << '\n';
  if (!a.per_sample.empty()) {
    Output rows(a.per_sample);
    for (const auto& row : report.per_sample) rows.stream() << todsum::to_json(row).dump() << '\n';
  }
  return 0;
}

// ---------------------------------------------------------------- rouge

struct RougeArgs {
  std::string gold, pred, out;
  TokenizerFlags tok;
};

int run_rouge(const RougeArgs& a) {
  const auto gold = read_gold(a.gold, nullptr);
  const auto preds = read_preds(a.pred, nullptr);
  const auto aligned = todsum::detail::align_predictions(gold, preds);
  const todsum::Tokenizer tokenizer(a.tok.options());
  json rows = json::array();
  std::vector<todsum::RougeTriple> triples;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (!gold[i].summary || !aligned[i]->summary) {
      throw todsum::ValidationError("rouge: \"" + gold[i].id + "\" lacks a summary");
    }
    triples.push_back(todsum::rouge_all(tokenizer(*aligned[i]->summary), tokenizer(*gold[i].summary)));
    rows.push_back({{"id", gold[i].id},
                    {"rouge1", prf(triples.back().r1)},
                    {"rouge2", prf(triples.back().r2)},
                    {"rougeL", prf(triples.back().rl)}});
  }
  auto mean = [&](todsum::RougeScore todsum::RougeTriple::*m) {
    std::vector<double> p, r, f;
    for (const auto& t : triples) {
      p.push_back((t.*m).precision);
      r.push_back((t.*m).recall);
      f.push_back((t.*m).f);
    }
    const double n = static_cast<double>(triples.size());
    return json{{"precision", todsum::sorted_sum(p) / n},
                {"recall", todsum::sorted_sum(r) / n},
                {"f", todsum::sorted_sum(f) / n}};
  };
  json report = {{"samples", gold.size()},
                 {"mean",
                  {{"rouge1", mean(&todsum::RougeTriple::r1)},
                   {"rouge2", mean(&todsum::RougeTriple::r2)},
                   {"rougeL", mean(&todsum::RougeTriple::rl)}}},
                 {"tokenizer", todsum::to_json(a.tok.options())},
                 {"per_sample", rows}};
  Output out(a.out);
  out.stream() << report.dump(2) << '\n';
  return 0;
}

// ---------------------------------------------------------------- extract

struct ExtractArgs {
  std::string input, ontology, out;
  std::string text;
};

int run_extract(const ExtractArgs& a) {
  const todsum::Ontology ontology = todsum::load_ontology(a.ontology);
  const todsum::TupleExtractor extractor(ontology);
  Output out(a.out);
  if (!a.text.empty()) {
    out.stream() << todsum::to_json(extractor(a.text)).dump() << '\n';
    return 0;
  }
  Input in(a.input);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in.stream(), line)) {
    ++lineno;
    if (todsum::text::is_blank(line)) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("id") || !j["id"].is_string() ||
        !j.contains("summary") || !j["summary"].is_string()) {
      throw todsum::ParseError("line " + std::to_string(lineno) +
                                   ": expected an object with string \"id\" and \"summary\"",
                               lineno);
    }
    json row = todsum::to_json(extractor(j["summary"].get<std::string>()));
    row["id"] = j["id"];
    out.stream() << row.dump() << '\n';
  }
  return 0;
}

// ---------------------------------------------------------------- codec

struct CodecArgs {
  std::string action, input, gold, ontology, out;
};

int run_codec(const CodecArgs& a) {
  std::unique_ptr<todsum::Ontology> ontology;
  if (!a.ontology.empty()) {
    ontology = std::make_unique<todsum::Ontology>(todsum::load_ontology(a.ontology));
  }
  Output out(a.out);
  if (a.action == "serialize" || a.action == "joint-encode") {
    for (const auto& d : read_gold(a.input, ontology.get())) {
      json row = {{"id", d.id}};
      if (a.action == "serialize") {
        row["state"] = todsum::serialize_state(d.state);
      } else {
        if (!d.summary) throw todsum::ValidationError("codec: \"" + d.id + "\" has no summary");
        row["target"] = todsum::encode_joint_target(d.state, *d.summary);
      }
      out.stream() << row.dump() << '\n';
    }
    return 0;
  }
  if (a.action == "joint-decode") {
    // Lines {"id", "output"} become prediction lines {"id", "summary", "state"}.
    Input in(a.input);
    std::string line;
    std::size_t lineno = 0;
    std::size_t missing = 0, malformed = 0;
    while (std::getline(in.stream(), line)) {
      ++lineno;
      if (todsum::text::is_blank(line)) continue;
      json j = json::parse(line, nullptr, false);
      if (j.is_discarded() || !j.is_object() || !j.contains("id") || !j["id"].is_string() ||
          !j.contains("output") || !j["output"].is_string()) {
        throw todsum::ParseError("line " + std::to_string(lineno) +
                                     ": expected an object with string \"id\" and \"output\"",
                                 lineno);
      }
      todsum::JointOutput dec =
          todsum::decode_joint_output(j["output"].get<std::string>(), ontology.get());
      missing += dec.missing_sentinel;
      malformed += dec.malformed_state;
      todsum::Prediction p{j["id"].get<std::string>(), dec.summary, dec.state};
      out.stream() << todsum::to_json(p).dump() << '\n';
    }
    if (missing + malformed > 0) {
      std::cerr << "joint-decode: " << missing << " outputs without sentinel, " << malformed
                << " with malformed state\n";
    }
    return 0;
  }
  // accuracy
  const auto gold = read_gold(a.gold, ontology.get());
  const auto preds = read_preds(a.input, ontology.get());
  const auto aligned = todsum::detail::align_predictions(gold, preds);
  std::vector<todsum::DialogueState> p, g;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (!aligned[i]->state) {
      throw todsum::ValidationError("codec: prediction \"" + gold[i].id + "\" has no state");
    }
    p.push_back(*aligned[i]->state);
    g.push_back(gold[i].state);
  }
  out.stream() << json{{"samples", gold.size()},
                       {"state_match_accuracy", todsum::state_match_accuracy(p, g)}}
                      .dump(2)
               << '\n';
  return 0;
}

// ---------------------------------------------------------------- baseline

struct BaselineArgs {
  std::string method = "lead3";
  std::string gold, out;
  TokenizerFlags tok;
};

int run_baseline(const BaselineArgs& a) {
  const auto gold = read_gold(a.gold, nullptr);
  const todsum::Tokenizer tokenizer(a.tok.options());
  Output out(a.out);
  for (const auto& d : gold) {
    todsum::ExtractiveSummary s;
    if (a.method == "lead3") {
      s = todsum::lead_k(d, 3);
    } else {
      if (!d.summary) throw todsum::ValidationError("baseline: \"" + d.id + "\" has no summary");
      s = todsum::greedy_oracle(d, *d.summary, tokenizer);
    }
    todsum::Prediction p{d.id, s.text, std::nullopt};
    out.stream() << todsum::to_json(p).dump() << '\n';
  }
  return 0;
}

// ---------------------------------------------------------------- noise

struct NoiseArgs {
  std::string input, ontology, out, meta;
  double accuracy = 1.0;
  std::vector<double> mix{1.0, 1.0, 1.0};
  std::uint64_t seed = 0;
};

int run_noise(const NoiseArgs& a) {
  const todsum::Ontology ontology = todsum::load_ontology(a.ontology);
  auto corpus = read_gold(a.input, &ontology);
  todsum::NoiseSpec spec;
  spec.target_accuracy = a.accuracy;
  spec.mix = {a.mix[0], a.mix[1], a.mix[2]};
  spec.validate();
  const auto universe = ontology.closed_tuple_universe();
  std::size_t gold_total = 0, correct = 0, noisy_total = 0;
  std::size_t deletes = 0, replaces = 0, inserts = 0;
  for (auto& d : corpus) {
    todsum::NoiseSpec per = spec;
    per.seed = todsum::derive_seed(a.seed, d.id);
    todsum::NoiseOutcome o = todsum::inject_noise_detailed(d.state, per, ontology, universe);
    gold_total += d.state.size();
    correct += todsum::intersection_size(o.state, d.state);
    noisy_total += o.state.size();
    deletes += o.deletes;
    replaces += o.replaces;
    inserts += o.inserts;
    d.state = std::move(o.state);
    d.domains = d.state.domains();
  }
  {
    Output out(a.out);
    todsum::save_corpus(out.stream(), corpus);
  }
  const double denom = static_cast<double>(std::max(gold_total, noisy_total));
  json meta = {{"target_accuracy", a.accuracy},
               {"realized_accuracy", denom == 0.0 ? 1.0 : static_cast<double>(correct) / denom},
               {"mix", {{"delete", a.mix[0]}, {"replace", a.mix[1]}, {"insert", a.mix[2]}}},
               {"seed", a.seed},
               {"dialogues", corpus.size()},
               {"gold_tuples", gold_total},
               {"noisy_tuples", noisy_total},
               {"correct_tuples", correct},
               {"operations", {{"delete", deletes}, {"replace", replaces}, {"insert", inserts}}},
               {"input", a.input},
               {"ontology", a.ontology}};
  std::string meta_path = a.meta;
  if (meta_path.empty()) {
    if (a.out.empty() || a.out == "-") {
      std::cerr << meta.dump(2) << '\n';
      return 0;
    }
    meta_path = a.out + ".meta.json";
  }
  Output m(meta_path);
  m.stream() << meta.dump(2) << '\n';
  return 0;
}

// ---------------------------------------------------------------- split-da

struct SplitArgs {
  std::string train, test, domain, out_dir;
  double fewshot = 0.0;
  std::uint64_t seed = 0;
};

void write_ids(const std::filesystem::path& path, const std::vector<std::string>& ids) {
  Output out(path.string());
  for (const auto& id : ids) out.stream() << id << '\n';
}

int run_split(const SplitArgs& a) {
  const auto train = read_gold(a.train, nullptr);
  const auto test = read_gold(a.test, nullptr);
  const todsum::DomainSplit split = todsum::make_da_splits(train, test, a.domain, a.fewshot, a.seed);
  for (const auto& w : split.warnings) std::cerr << "warning: " << w << '\n';
  std::filesystem::create_directories(a.out_dir);
  const std::filesystem::path dir(a.out_dir);
  write_ids(dir / "train.ids", split.train);
  write_ids(dir / "test.ids", split.test);
  write_ids(dir / "fewshot.ids", split.fewshot);
  json meta = todsum::to_json(split);
  meta["train_input"] = a.train;
  meta["test_input"] = a.test;
  Output m((dir / "split.json").string());
  m.stream() << meta.dump(2) << '\n';
  return 0;
}

// ---------------------------------------------------------------- stats

struct StatsArgs {
  std::vector<std::string> inputs;
  std::string ontology, out;
  TokenizerFlags tok;
};

int run_stats(const StatsArgs& a) {
  std::unique_ptr<todsum::Ontology> ontology;
  if (!a.ontology.empty()) {
    ontology = std::make_unique<todsum::Ontology>(todsum::load_ontology(a.ontology));
  }
  std::vector<todsum::Dialogue> corpus;
  for (const auto& path : a.inputs) {
    auto part = read_gold(path, ontology.get());
    corpus.insert(corpus.end(), std::make_move_iterator(part.begin()),
                  std::make_move_iterator(part.end()));
  }
  json j = todsum::to_json(todsum::corpus_stats(corpus, todsum::Tokenizer(a.tok.options())));
  j["tokenizer"] = todsum::to_json(a.tok.options());
  Output out(a.out);
  out.stream() << j.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Task-oriented dialogue summarization benchmark toolkit"};
  app.require_subcommand(1);
  std::function<int()> action;

  EvaluateArgs ev;
  auto* evaluate = app.add_subcommand("evaluate", "Score predictions: ROUGE, factual P/R/F1, error types");
  evaluate->add_option("--gold", ev.gold, "Gold corpus (JSONL)")->required();
  evaluate->add_option("--pred", ev.pred, "Prediction file (JSONL, '-' for stdin)")->required();
  evaluate->add_option("--ontology", ev.ontology, "Ontology (JSON)")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--state-channel", ev.channel, "Where the predicted state comes from")
      ->check(CLI::IsMember({"extract", "pred-file"}))
      ->capture_default_str();
  evaluate->add_option("--workers", ev.workers, "Worker threads")->check(CLI::Range(1, 256))->capture_default_str();
  evaluate->add_option("--out", ev.out, "Report path (default stdout)");
  evaluate->add_option("--per-sample", ev.per_sample, "Optional per-sample JSONL path");
  ev.tok.attach(evaluate);
  evaluate->callback([&] { action = [&] { return run_evaluate(ev); }; });

  RougeArgs rg;
  auto* rouge = app.add_subcommand("rouge", "Per-sample and mean ROUGE-1/2/L");
  rouge->add_option("--gold", rg.gold, "Gold corpus (JSONL)")->required();
  rouge->add_option("--pred", rg.pred, "Prediction file (JSONL, '-' for stdin)")->required();
  rouge->add_option("--out", rg.out, "Output path (default stdout)");
  rg.tok.attach(rouge);
  rouge->callback([&] { action = [&] { return run_rouge(rg); }; });

  ExtractArgs ex;
  auto* extract = app.add_subcommand("extract", "Extract state tuples from summaries");
  extract->add_option("--ontology", ex.ontology, "Ontology (JSON)")->required()->check(CLI::ExistingFile);
  auto* ex_in = extract->add_option("--input", ex.input, "JSONL with id and summary ('-' for stdin)");
  auto* ex_text = extract->add_option("--text", ex.text, "A single summary");
  ex_in->excludes(ex_text);
  extract->add_option("--out", ex.out, "Output JSONL (default stdout)");
  extract->callback([&] {
    if (ex.input.empty() && ex.text.empty()) throw CLI::RequiredError("--input or --text");
    action = [&] { return run_extract(ex); };
  });

  CodecArgs cd;
  auto* codec = app.add_subcommand("codec", "State serialization and joint-target helpers");
  codec->add_option("action", cd.action,
                    "serialize | joint-encode | joint-decode | accuracy")
      ->required()
      ->check(CLI::IsMember({"serialize", "joint-encode", "joint-decode", "accuracy"}));
  codec->add_option("--input", cd.input,
                    "Corpus (serialize, joint-encode), {id, output} lines (joint-decode) "
                    "or predictions with state (accuracy)")
      ->required();
  codec->add_option("--gold", cd.gold, "Gold corpus (accuracy)");
  codec->add_option("--ontology", cd.ontology, "Ontology for value normalization");
  codec->add_option("--out", cd.out, "Output path (default stdout)");
  codec->callback([&] {
    if (cd.action == "accuracy" && cd.gold.empty()) throw CLI::RequiredError("--gold");
    action = [&] { return run_codec(cd); };
  });

  BaselineArgs bl;
  auto* baseline = app.add_subcommand("baseline", "Extractive baselines as a prediction file");
  baseline->add_option("--method", bl.method, "lead3 or oracle (greedy ROUGE-2)")
      ->check(CLI::IsMember({"lead3", "oracle"}))
      ->capture_default_str();
  baseline->add_option("--gold", bl.gold, "Corpus (JSONL, '-' for stdin)")->required();
  baseline->add_option("--out", bl.out, "Prediction path (default stdout)");
  bl.tok.attach(baseline);
  baseline->callback([&] { action = [&] { return run_baseline(bl); }; });

  NoiseArgs nz;
  auto* noise = app.add_subcommand("noise", "Perturb gold states to a target tuple accuracy");
  noise->add_option("--input", nz.input, "Corpus (JSONL)")->required();
  noise->add_option("--ontology", nz.ontology, "Ontology (JSON)")->required()->check(CLI::ExistingFile);
  noise->add_option("--accuracy", nz.accuracy, "Target tuple accuracy")->required()->check(CLI::Range(0.0, 1.0));
  noise->add_option("--mix", nz.mix, "Delete,replace,insert weights")
      ->delimiter(',')
      ->expected(3)
      ->capture_default_str();
  noise->add_option("--seed", nz.seed, "Random seed")->capture_default_str();
  noise->add_option("--out", nz.out, "Output corpus (default stdout)");
  noise->add_option("--meta", nz.meta, "Metadata path (default <out>.meta.json)");
  noise->callback([&] { action = [&] { return run_noise(nz); }; });

  SplitArgs sp;
  auto* split = app.add_subcommand("split-da", "Leave-one-domain-out split with a few-shot sample");
  split->add_option("--train", sp.train, "Training partition (JSONL)")->required();
  split->add_option("--test", sp.test, "Test partition (JSONL)")->required();
  split->add_option("--target-domain", sp.domain, "Held-out domain")->required();
  split->add_option("--fewshot", sp.fewshot, "Fraction of target dialogues kept for training")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  split->add_option("--seed", sp.seed, "Random seed")->capture_default_str();
  split->add_option("--out-dir", sp.out_dir, "Directory for id lists and split.json")->required();
  split->callback([&] { action = [&] { return run_split(sp); }; });

  StatsArgs st;
  auto* stats = app.add_subcommand("stats", "Corpus statistics");
  stats->add_option("--input", st.inputs, "Corpus files (JSONL), pooled")->required();
  stats->add_option("--ontology", st.ontology, "Validate against this ontology");
  stats->add_option("--out", st.out, "Output path (default stdout)");
  st.tok.attach(stats);
  stats->callback([&] { action = [&] { return run_stats(st); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    return action();
  } catch (const todsum::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
  }
  return kExitData;
}
