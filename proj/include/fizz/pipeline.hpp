// Copyright 2026 The FIZZ Authors.
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

#include <cstddef>
#include <iomanip>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fizz/coref.hpp"
#include "fizz/decomposer.hpp"
#include "fizz/errors.hpp"
#include "fizz/filter.hpp"
#include "fizz/llm.hpp"
#include "fizz/nli.hpp"
#include "fizz/retry.hpp"
#include "fizz/scorer.hpp"
#include "fizz/segmentation.hpp"

namespace fizz {

/// Produces mention clusters for a text.
class CorefBackend {
 public:
  virtual ~CorefBackend() = default;
  virtual CorefClusterSet clusters(const std::string& text) = 0;
};

/// Fixture-backed clusters: a JSON array of cluster sets looked up by exact
/// text. A text with no entry has no clusters.
class ScriptedCoref : public CorefBackend {
 public:
  void add(CorefClusterSet set) {
    auto key = set.text;
    sets_[key] = std::move(set);
  }

  static std::shared_ptr<ScriptedCoref> from_json(const nlohmann::json& j) {
    auto out = std::make_shared<ScriptedCoref>();
    if (j.is_object()) {
      out->add(cluster_set_from_json(j));
    } else if (j.is_array()) {
      for (const auto& s : j) out->add(cluster_set_from_json(s));
    } else {
      throw ConfigError("coref fixture must be a cluster set or an array of them");
    }
    return out;
  }

  static std::shared_ptr<ScriptedCoref> from_file(const std::string& path) {
    try {
      return from_json(detail::read_json_file(path));
    } catch (const ValidationError& e) {
      throw ConfigError(path + ": " + e.what());
    }
  }

  CorefClusterSet clusters(const std::string& text) override {
    auto it = sets_.find(text);
    if (it == sets_.end()) return {text, {}};
    return it->second;
  }

 private:
  std::map<std::string, CorefClusterSet> sets_;
};

/// POST <url>/coref {"text"} -> cluster set JSON.
class HttpCoref : public CorefBackend {
 public:
  explicit HttpCoref(const std::string& url, RetryPolicy retry = {})
      : endpoint_(detail::route(url, "/coref")), retry_(std::move(retry)) {}

  CorefClusterSet clusters(const std::string& text) override {
    const auto j = with_retry(retry_, [&] {
      return detail::post_json(endpoint_, {{"text", text}});
    });
    auto set = cluster_set_from_json(j);
    if (set.text != text) throw ValidationError("/coref echoed a different text");
    return set;
  }

 private:
  detail::Endpoint endpoint_;
  RetryPolicy retry_;
};

struct Backends {
  std::shared_ptr<CorefBackend> coref;
  std::shared_ptr<LlmClient> llm;
  std::shared_ptr<NliScorer> nli;
};

struct PipelineOptions {
  std::size_t gran = 3;
  bool use_coref = true;
  bool use_filter = true;
  std::size_t max_fact_tokens = 60;
  std::size_t workers = 4;
  DecomposeOptions decompose{};
  const AbbreviationList* abbreviations = &AbbreviationList::defaults();
};

struct ReportedFact {
  AtomicFact fact;
  FactScore score;
  bool over_length = false;  // longer than max_fact_tokens
};

struct FizzReport {
  std::string id;
  double fizz_score = 0.0;
  PipelineOptions config;
  std::vector<std::string> document_sentences;
  std::vector<std::string> summary_sentences;
  std::vector<Substitution> document_substitutions;
  std::vector<Substitution> summary_substitutions;
  std::vector<std::string> completions;
  std::vector<ReportedFact> facts;
  std::vector<DroppedFact> dropped_facts;
};

namespace detail {

inline ResolvedText maybe_resolve(const std::string& text, CorefBackend* coref, bool enabled) {
  if (!enabled || coref == nullptr) return {text, text, {}};
  return resolve(text, coref->clusters(text));
}

}  // namespace detail

/// Full pipeline for one (document, summary) pair: coreference resolution,
/// sentence splitting, decomposition, filtering, pairwise scoring,
/// granularity expansion, and the final minimum.
///
/// Throws EmptyFactSet when the filter removes every fact.
inline FizzReport score_pair(const std::string& id, const std::string& document,
                             const std::string& summary, const Backends& backends,
                             const PipelineOptions& options = {}) {
  if (!backends.llm || !backends.nli) {
    throw ContractViolation("score_pair needs an LLM client and an NLI scorer");
  }
  if (options.gran < 1) throw ConfigError("gran must be >= 1");
  FizzReport report;
  report.id = id;
  report.config = options;

  const auto doc_resolved =
      detail::maybe_resolve(document, backends.coref.get(), options.use_coref);
  const auto sum_resolved =
      detail::maybe_resolve(summary, backends.coref.get(), options.use_coref);
  report.document_substitutions = doc_resolved.substitutions;
  report.summary_substitutions = sum_resolved.substitutions;

  const auto doc = split_sentences(doc_resolved.text, *options.abbreviations);
  const auto sum = split_sentences(sum_resolved.text, *options.abbreviations);
  if (doc.empty()) throw ContractViolation("pair " + id + ": empty document");
  if (sum.empty()) throw ContractViolation("pair " + id + ": empty summary");
  report.document_sentences = doc.texts();
  report.summary_sentences = sum.texts();

  auto decomposition = decompose_detailed(sum, *backends.llm, options.decompose);
  report.completions = std::move(decomposition.completions);

  std::vector<AtomicFact> kept;
  if (options.use_filter) {
    auto filtered = filter_facts(sum, decomposition.facts, *backends.nli, options.workers);
    kept = std::move(filtered.kept);
    report.dropped_facts = std::move(filtered.dropped);
  } else {
    kept = std::move(decomposition.facts);
  }
  if (kept.empty()) {
    throw EmptyFactSet("pair " + id + ": every atomic fact was filtered out");
  }

  const auto matrix = score_pairwise(doc, kept, *backends.nli, options.workers);
  auto scores = granularity_expand(doc, kept, matrix, options.gran, *backends.nli,
                                   options.workers);
  report.fizz_score = fizz_score(scores);
  for (std::size_t k = 0; k < kept.size(); ++k) {
    const bool over = count_tokens(kept[k].text) > options.max_fact_tokens;
    report.facts.push_back({std::move(kept[k]), std::move(scores[k]), over});
  }
  return report;
}

// Stable field order; consumers may rely on it for golden comparisons.
inline nlohmann::ordered_json to_json(const FizzReport& r) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["id"] = r.id;
  j["fizz_score"] = r.fizz_score;
  j["config"] = {{"gran", r.config.gran},
                 {"coref", r.config.use_coref},
                 {"filter", r.config.use_filter},
                 {"max_fact_tokens", r.config.max_fact_tokens}};
  j["document_sentences"] = r.document_sentences;
  j["summary_sentences"] = r.summary_sentences;
  auto subs = [](const std::vector<Substitution>& v) {
    ordered_json a = ordered_json::array();
    for (const auto& s : v) a.push_back(to_json(s));
    return a;
  };
  j["coref"] = {{"document", subs(r.document_substitutions)},
                {"summary", subs(r.summary_substitutions)}};
  j["completions"] = r.completions;
  j["facts"] = ordered_json::array();
  for (const auto& f : r.facts) {
    j["facts"].push_back({{"text", f.fact.text},
                          {"source_sentence_index", f.fact.source_sentence_index},
                          {"over_length", f.over_length},
                          {"base_best_index", f.score.base_best_index},
                          {"base_score", f.score.base_score},
                          {"expanded", f.score.expanded},
                          {"windows_tried", f.score.windows_tried},
                          {"window_scores", f.score.window_scores},
                          {"final_score", f.score.final_score},
                          {"best_window", f.score.best_window}});
  }
  j["dropped_facts"] = ordered_json::array();
  for (const auto& d : r.dropped_facts) {
    j["dropped_facts"].push_back({{"text", d.fact.text},
                                  {"source_sentence_index", d.fact.source_sentence_index},
                                  {"best_sentence", d.best_sentence},
                                  {"best_label", to_string(d.best_triple.argmax())},
                                  {"entailment", d.best_triple.e}});
  }
  return j;
}

/// Plain-text table: one row per fact with its score and the document text
/// of its best supporting window.
inline std::string render_table(const FizzReport& r) {
  std::ostringstream os;
  os << "pair: " << r.id << '\n';
  os << std::fixed << std::setprecision(4);
  for (const auto& f : r.facts) {
    std::string window;
    for (std::size_t idx : f.score.best_window) {
      if (!window.empty()) window += ' ';
      window += r.document_sentences.at(idx);
    }
    os << "  " << f.score.final_score << (f.score.expanded ? " *" : "  ") << "  "
       << f.fact.text << (f.over_length ? " [long]" : "") << "\n           <- "
       << window << '\n';
  }
  for (const auto& d : r.dropped_facts) {
    os << "  dropped  " << d.fact.text << " (" << to_string(d.best_triple.argmax())
       << ", e=" << d.best_triple.e << ")\n";
  }
  os << "FIZZ score: " << r.fizz_score << '\n';
  return os.str();
}

}  // namespace fizz
