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

// End-to-end scoring of summary predictions against a gold corpus: ROUGE,
// state-aware factual consistency and the factual error profile.

#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "todsum/corpus.hpp"
#include "todsum/error.hpp"
#include "todsum/extractor.hpp"
#include "todsum/factual.hpp"
#include "todsum/ontology.hpp"
#include "todsum/rouge.hpp"
#include "todsum/tokenizer.hpp"

namespace todsum {

inline constexpr const char* kReportSchemaVersion = "1.0";

enum class StateChannel {
  kExtract,   // tuples extracted from the predicted summary
  kPredFile,  // tuples supplied in the prediction file
};

inline const char* to_string(StateChannel c) {
  return c == StateChannel::kExtract ? "extract" : "pred-file";
}

struct EvaluateOptions {
  TokenizerOptions tokenizer;
  StateChannel channel = StateChannel::kExtract;
  std::size_t workers = 1;  // never affects the report
  // Echoed into the report only.
  std::string gold_path;
  std::string predictions_path;
  std::string ontology_path;
};

struct SampleResult {
  std::string id;
  RougeTriple rouge;
  FactualScore factual;
  ErrorProfile errors;
  DialogueState hyp_state;
  std::size_t unattached = 0;
  std::size_t ambiguous = 0;
};

struct RougeMeans {
  double precision = 0.0;
  double recall = 0.0;
  double f = 0.0;
};

struct EvaluationReport {
  std::size_t samples = 0;
  RougeMeans rouge1, rouge2, rougeL;
  FactualReport factual;
  std::size_t unattached = 0;
  std::size_t ambiguous = 0;
  EvaluateOptions options;
  std::vector<SampleResult> per_sample;  // gold order
};

namespace detail {

// Pairs every gold dialogue with its prediction. Missing and unknown ids
// are reported together.
inline std::vector<const Prediction*> align_predictions(
    const std::vector<Dialogue>& gold, const std::vector<Prediction>& preds) {
  std::map<std::string, const Prediction*> by_id;
  for (const auto& p : preds) by_id.emplace(p.id, &p);
  std::vector<const Prediction*> aligned;
  std::vector<std::string> missing;
  std::set<std::string> gold_ids;
  for (const auto& d : gold) {
    gold_ids.insert(d.id);
    auto it = by_id.find(d.id);
    if (it == by_id.end()) {
      missing.push_back(d.id);
    } else {
      aligned.push_back(it->second);
    }
  }
  std::vector<std::string> unknown;
  for (const auto& p : preds) {
    if (!gold_ids.count(p.id)) unknown.push_back(p.id);
  }
  if (!missing.empty() || !unknown.empty()) {
    std::string msg;
    if (!missing.empty()) msg += "predictions missing for ids: " + text::join(missing, ", ");
    if (!unknown.empty()) {
      if (!msg.empty()) msg += "; ";
      msg += "predictions for unknown ids: " + text::join(unknown, ", ");
    }
    throw ValidationError(msg);
  }
  return aligned;
}

template <typename Fn>
void parallel_for(std::size_t count, std::size_t workers, Fn&& fn) {
  workers = std::max<std::size_t>(1, std::min(workers, count));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += workers) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

inline RougeMeans rouge_means(const std::vector<SampleResult>& rows,
                              const RougeScore RougeTriple::*member) {
  std::vector<double> p, r, f;
  for (const auto& row : rows) {
    const RougeScore& s = row.rouge.*member;
    p.push_back(s.precision);
    r.push_back(s.recall);
    f.push_back(s.f);
  }
  const double n = static_cast<double>(rows.size());
  return {sorted_sum(std::move(p)) / n, sorted_sum(std::move(r)) / n,
          sorted_sum(std::move(f)) / n};
}

inline nlohmann::json to_json(const RougeScore& s) {
  return {{"precision", s.precision}, {"recall", s.recall}, {"f", s.f}};
}

inline nlohmann::json to_json(const RougeMeans& s) {
  return {{"precision", s.precision}, {"recall", s.recall}, {"f", s.f}};
}

}  // namespace detail

// Scores every gold dialogue against its prediction. With the pred-file
// channel each prediction must carry a state; otherwise tuples are
// extracted from the predicted summary.
inline EvaluationReport evaluate(const std::vector<Dialogue>& gold,
                                 const std::vector<Prediction>& preds,
                                 const Ontology& ontology,
                                 const EvaluateOptions& options = {}) {
  if (gold.empty()) throw ValidationError("evaluate: empty gold corpus");
  const auto aligned = detail::align_predictions(gold, preds);
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (!gold[i].summary) {
      throw ValidationError("evaluate: gold dialogue \"" + gold[i].id + "\" has no summary");
    }
    if (!aligned[i]->summary) {
      throw ValidationError("evaluate: prediction \"" + gold[i].id + "\" has no summary");
    }
    if (options.channel == StateChannel::kPredFile && !aligned[i]->state) {
      throw ValidationError("evaluate: prediction \"" + gold[i].id +
                            "\" has no state (required by --state-channel pred-file)");
    }
  }

  const Tokenizer tokenizer(options.tokenizer);
  const TupleExtractor extractor(ontology);
  EvaluationReport report;
  report.options = options;
  report.samples = gold.size();
  report.per_sample.resize(gold.size());

  detail::parallel_for(gold.size(), options.workers, [&](std::size_t i) {
    const Dialogue& g = gold[i];
    const Prediction& p = *aligned[i];
    SampleResult& row = report.per_sample[i];
    row.id = g.id;
    row.rouge = rouge_all(tokenizer(*p.summary), tokenizer(*g.summary));
    if (options.channel == StateChannel::kPredFile) {
      for (const StateTuple& t : *p.state) {
        auto canon = ontology.canonicalize(t);
        row.hyp_state.insert(canon ? *canon : t);
      }
    } else {
      ExtractionResult ex = extractor(*p.summary);
      row.hyp_state = std::move(ex.tuples);
      row.unattached = ex.unattached.size();
      row.ambiguous = ex.ambiguous.size();
    }
    row.factual = factual_prf(row.hyp_state, g.state);
    row.errors = classify_errors(row.hyp_state, g.state);
  });

  std::vector<SampleScore> scores;
  scores.reserve(gold.size());
  for (const auto& row : report.per_sample) {
    scores.push_back({row.factual, row.errors});
    report.unattached += row.unattached;
    report.ambiguous += row.ambiguous;
  }
  report.factual = aggregate_report(scores);
  report.rouge1 = detail::rouge_means(report.per_sample, &RougeTriple::r1);
  report.rouge2 = detail::rouge_means(report.per_sample, &RougeTriple::r2);
  report.rougeL = detail::rouge_means(report.per_sample, &RougeTriple::rl);
  return report;
}

inline nlohmann::json to_json(const TokenizerOptions& t) {
  return {{"lowercase", t.lowercase},
          {"strip_punctuation", t.strip_punctuation},
          {"fold_number_words", t.fold_number_words},
          {"stem", t.stem}};
}

inline nlohmann::json conventions_json() {
  return {{"factual_match", "exact (domain, intent, slot, value) equality after ontology normalization"},
          {"factual_both_empty", 1.0},
          {"factual_one_side_empty", 0.0},
          {"rouge_both_empty", 1.0},
          {"rouge_n_counts", "clipped"},
          {"rouge_l", "sentence-level LCS"},
          {"macro", "unweighted mean of per-sample scores"},
          {"micro", "recomputed from summed counts"},
          {"errors", "per-sample mean of each error type"},
          {"state_match", "joint set match"}};
}

inline nlohmann::json to_json(const EvaluationReport& r) {
  using nlohmann::json;
  json errors_mean = json::object();
  json errors_total = json::object();
  for (std::size_t k = 0; k < kErrorTypeCount; ++k) {
    const char* name = to_string(static_cast<ErrorType>(k));
    errors_mean[name] = r.factual.error_means[k];
    errors_total[name] = r.factual.error_totals[k];
  }
  return {
      {"schema_version", kReportSchemaVersion},
      {"samples", r.samples},
      {"rouge",
       {{"rouge1", detail::to_json(r.rouge1)},
        {"rouge2", detail::to_json(r.rouge2)},
        {"rougeL", detail::to_json(r.rougeL)}}},
      {"factual",
       {{"micro", to_json(r.factual.micro)},
        {"macro",
         {{"precision", r.factual.macro_precision},
          {"recall", r.factual.macro_recall},
          {"f1", r.factual.macro_f1}}}}},
      {"errors", {{"per_sample_mean", errors_mean}, {"totals", errors_total}}},
      {"extraction", {{"unattached_values", r.unattached}, {"ambiguous_tuples", r.ambiguous}}},
      {"config",
       {{"gold", r.options.gold_path},
        {"predictions", r.options.predictions_path},
        {"ontology", r.options.ontology_path},
        {"state_channel", to_string(r.options.channel)},
        {"tokenizer", to_json(r.options.tokenizer)},
        {"conventions", conventions_json()}}}};
}

inline nlohmann::json to_json(const SampleResult& s) {
  return {{"id", s.id},
          {"rouge1", detail::to_json(s.rouge.r1)},
          {"rouge2", detail::to_json(s.rouge.r2)},
          {"rougeL", detail::to_json(s.rouge.rl)},
          {"factual", to_json(s.factual)},
          {"errors", to_json(s.errors)},
          {"hyp_state", detail::state_to_json(s.hyp_state)},
          {"unattached_values", s.unattached},
          {"ambiguous_tuples", s.ambiguous}};
}

// Structural check of an evaluation report; returns one message per
// problem, empty when the report conforms to kReportSchemaVersion.
inline std::vector<std::string> check_report_schema(const nlohmann::json& j) {
  std::vector<std::string> problems;
  auto need = [&](const nlohmann::json& obj, const std::string& path, const char* key,
                  auto&& predicate, const char* type) -> const nlohmann::json* {
    if (!obj.is_object() || !obj.contains(key)) {
      problems.push_back(path + "." + key + ": missing");
      return nullptr;
    }
    if (!predicate(obj[key])) {
      problems.push_back(path + "." + key + ": expected " + type);
      return nullptr;
    }
    return &obj[key];
  };
  auto is_obj = [](const nlohmann::json& v) { return v.is_object(); };
  auto is_str = [](const nlohmann::json& v) { return v.is_string(); };
  auto is_count = [](const nlohmann::json& v) { return v.is_number_unsigned(); };
  auto is_unit = [](const nlohmann::json& v) {
    return v.is_number() && v.get<double>() >= 0.0 && v.get<double>() <= 1.0;
  };
  auto is_nonneg = [](const nlohmann::json& v) { return v.is_number() && v.get<double>() >= 0.0; };
  auto is_bool = [](const nlohmann::json& v) { return v.is_boolean(); };

  if (auto* v = need(j, "$", "schema_version", is_str, "string");
      v && v->get<std::string>() != kReportSchemaVersion) {
    problems.push_back("$.schema_version: unexpected version " + v->get<std::string>());
  }
  need(j, "$", "samples", is_count, "unsigned integer");
  if (auto* rouge = need(j, "$", "rouge", is_obj, "object")) {
    for (const char* variant : {"rouge1", "rouge2", "rougeL"}) {
      if (auto* s = need(*rouge, "$.rouge", variant, is_obj, "object")) {
        for (const char* f : {"precision", "recall", "f"}) {
          need(*s, std::string("$.rouge.") + variant, f, is_unit, "number in [0, 1]");
        }
      }
    }
  }
  if (auto* fac = need(j, "$", "factual", is_obj, "object")) {
    if (auto* micro = need(*fac, "$.factual", "micro", is_obj, "object")) {
      for (const char* f : {"precision", "recall", "f1"}) {
        need(*micro, "$.factual.micro", f, is_unit, "number in [0, 1]");
      }
      for (const char* f : {"n_hyp", "n_tgt", "n_match"}) {
        need(*micro, "$.factual.micro", f, is_count, "unsigned integer");
      }
    }
    if (auto* macro = need(*fac, "$.factual", "macro", is_obj, "object")) {
      for (const char* f : {"precision", "recall", "f1"}) {
        need(*macro, "$.factual.macro", f, is_unit, "number in [0, 1]");
      }
    }
  }
  if (auto* err = need(j, "$", "errors", is_obj, "object")) {
    auto* mean = need(*err, "$.errors", "per_sample_mean", is_obj, "object");
    auto* total = need(*err, "$.errors", "totals", is_obj, "object");
    for (std::size_t k = 0; k < kErrorTypeCount; ++k) {
      const char* name = to_string(static_cast<ErrorType>(k));
      if (mean) need(*mean, "$.errors.per_sample_mean", name, is_nonneg, "non-negative number");
      if (total) need(*total, "$.errors.totals", name, is_count, "unsigned integer");
    }
  }
  if (auto* ex = need(j, "$", "extraction", is_obj, "object")) {
    need(*ex, "$.extraction", "unattached_values", is_count, "unsigned integer");
    need(*ex, "$.extraction", "ambiguous_tuples", is_count, "unsigned integer");
  }
  if (auto* cfg = need(j, "$", "config", is_obj, "object")) {
    for (const char* f : {"gold", "predictions", "ontology"}) need(*cfg, "$.config", f, is_str, "string");
    if (auto* ch = need(*cfg, "$.config", "state_channel", is_str, "string");
        ch && *ch != "extract" && *ch != "pred-file") {
      problems.push_back("$.config.state_channel: unknown channel");
    }
    if (auto* tok = need(*cfg, "$.config", "tokenizer", is_obj, "object")) {
      for (const char* f : {"lowercase", "strip_punctuation", "fold_number_words", "stem"}) {
        need(*tok, "$.config.tokenizer", f, is_bool, "boolean");
      }
    }
    if (auto* conv = need(*cfg, "$.config", "conventions", is_obj, "object")) {
      for (const char* f : {"factual_both_empty", "factual_one_side_empty", "rouge_both_empty"}) {
        need(*conv, "$.config.conventions", f, is_unit, "number in [0, 1]");
      }
      for (const char* f : {"factual_match", "rouge_n_counts", "rouge_l", "macro", "micro",
                            "errors", "state_match"}) {
        need(*conv, "$.config.conventions", f, is_str, "string");
      }
    }
  }
  return problems;
}

}  // namespace todsum
