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

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fizz/errors.hpp"
#include "fizz/segmentation.hpp"

namespace fizz {

struct Rouge {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Unigram ROUGE: lower-cased whitespace tokens, clipped overlap counts.
inline Rouge rouge1(std::string_view candidate, std::string_view reference) {
  const auto cand = text::whitespace_tokens(candidate);
  const auto ref = text::whitespace_tokens(reference);
  if (cand.empty() || ref.empty()) return {};
  std::map<std::string, std::size_t> counts;
  for (auto t : ref) ++counts[text::lower(t)];
  std::size_t overlap = 0;
  for (auto t : cand) {
    auto it = counts.find(text::lower(t));
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++overlap;
    }
  }
  if (overlap == 0) return {};
  Rouge r;
  r.precision = static_cast<double>(overlap) / static_cast<double>(cand.size());
  r.recall = static_cast<double>(overlap) / static_cast<double>(ref.size());
  r.f1 = 2.0 * r.precision * r.recall / (r.precision + r.recall);
  return r;
}

struct FactSetPair {
  std::string id;
  std::vector<std::string> generated;
  std::vector<std::string> human;
};

struct SimilarityResult {
  double value = 0.0;
  std::vector<std::string> warnings;
};

/// Mean over pairs of the mean over generated facts of the best ROUGE-1 F1
/// against any human fact. A pair with no generated facts contributes 0.
inline SimilarityResult content_similarity(const std::vector<FactSetPair>& pairs) {
  SimilarityResult out;
  if (pairs.empty()) {
    out.warnings.push_back("empty corpus");
    return out;
  }
  double total = 0.0;
  for (const auto& p : pairs) {
    if (p.human.empty()) {
      throw ContractViolation("content_similarity: pair \"" + p.id + "\" has no human facts");
    }
    if (p.generated.empty()) {
      out.warnings.push_back("pair \"" + p.id + "\" has no generated facts");
      continue;
    }
    double pair_sum = 0.0;
    for (const auto& c : p.generated) {
      double best = 0.0;
      for (const auto& g : p.human) best = std::max(best, rouge1(c, g).f1);
      pair_sum += best;
    }
    total += pair_sum / static_cast<double>(p.generated.size());
  }
  out.value = total / static_cast<double>(pairs.size());
  return out;
}

struct FactStats {
  double avg_count = 0.0;
  double avg_token_length = 0.0;  // total whitespace tokens across a summary's facts
  std::vector<std::string> warnings;
};

inline FactStats fact_stats(const std::vector<std::vector<std::string>>& fact_sets) {
  FactStats out;
  if (fact_sets.empty()) {
    out.warnings.push_back("empty corpus");
    return out;
  }
  double count = 0.0;
  double tokens = 0.0;
  for (const auto& facts : fact_sets) {
    count += static_cast<double>(facts.size());
    for (const auto& f : facts) tokens += static_cast<double>(count_tokens(f));
  }
  out.avg_count = count / static_cast<double>(fact_sets.size());
  out.avg_token_length = tokens / static_cast<double>(fact_sets.size());
  return out;
}

// JSONL of {"id": str, "generated": [str], "human": [str]}.
inline std::vector<FactSetPair> load_fact_pairs(std::istream& in) {
  std::vector<FactSetPair> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (text::trim(line).empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      out.push_back({j.at("id").get<std::string>(),
                     j.at("generated").get<std::vector<std::string>>(),
                     j.at("human").get<std::vector<std::string>>()});
    } catch (const nlohmann::json::exception& e) {
      throw DatasetError(e.what(), n);
    }
  }
  return out;
}

inline std::vector<FactSetPair> load_fact_pairs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DatasetError("cannot open fact pairs: " + path);
  return load_fact_pairs(in);
}

struct FactQualityReport {
  std::size_t summaries = 0;
  double content_similarity = 0.0;
  FactStats generated;
  FactStats human;
  std::vector<std::string> warnings;
};

/// The three fact-quality families for generated facts plus the same count
/// and length statistics for the human reference facts.
inline FactQualityReport analyze_facts(const std::vector<FactSetPair>& pairs) {
  FactQualityReport r;
  r.summaries = pairs.size();
  auto sim = content_similarity(pairs);
  r.content_similarity = sim.value;
  std::vector<std::vector<std::string>> gen, hum;
  for (const auto& p : pairs) {
    gen.push_back(p.generated);
    hum.push_back(p.human);
  }
  r.generated = fact_stats(gen);
  r.human = fact_stats(hum);
  r.warnings = std::move(sim.warnings);
  for (const auto& w : r.generated.warnings) r.warnings.push_back(w);
  return r;
}

inline nlohmann::ordered_json to_json(const FactQualityReport& r) {
  return {{"summaries", r.summaries},
          {"content_similarity", r.content_similarity},
          {"generated", {{"avg_fact_count", r.generated.avg_count},
                         {"avg_token_length", r.generated.avg_token_length}}},
          {"human", {{"avg_fact_count", r.human.avg_count},
                     {"avg_token_length", r.human.avg_token_length}}},
          {"warnings", r.warnings}};
}

}  // namespace fizz
