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
#include <string>
#include <vector>

#include "fizz/decomposer.hpp"
#include "fizz/errors.hpp"
#include "fizz/nli.hpp"
#include "fizz/parallel.hpp"
#include "fizz/segmentation.hpp"

namespace fizz {

// Consecutive document sentence indices, ascending.
using Window = std::vector<std::size_t>;

/// M x L grid of NLI triples: document sentence i (premise) by fact k
/// (hypothesis).
class ScoreMatrix {
 public:
  ScoreMatrix() = default;
  ScoreMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), cells_(rows * cols) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  NliTriple& at(std::size_t i, std::size_t k) { return cells_[i * cols_ + k]; }
  const NliTriple& at(std::size_t i, std::size_t k) const { return cells_[i * cols_ + k]; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<NliTriple> cells_;
};

inline ScoreMatrix score_pairwise(const SentenceList& doc,
                                  const std::vector<AtomicFact>& facts,
                                  NliScorer& nli, std::size_t workers = 1) {
  if (doc.empty()) throw ContractViolation("score_pairwise: empty document");
  if (facts.empty()) throw ContractViolation("score_pairwise: no facts");
  ScoreMatrix m(doc.size(), facts.size());
  parallel_for(doc.size() * facts.size(), workers, [&](std::size_t idx) {
    const std::size_t i = idx / facts.size();
    const std::size_t k = idx % facts.size();
    m.at(i, k) = nli.score(doc[i].text, facts[k].text);
  });
  return m;
}

struct BaseScore {
  double score = 0.0;           // max entailment over document sentences
  std::size_t best_index = 0;   // first row attaining it
  bool needs_expansion = false; // the triple at best_index is not entailment-argmax
};

inline std::vector<BaseScore> base_vector(const ScoreMatrix& matrix) {
  std::vector<BaseScore> out;
  out.reserve(matrix.cols());
  for (std::size_t k = 0; k < matrix.cols(); ++k) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < matrix.rows(); ++i) {
      if (matrix.at(i, k).e > matrix.at(best, k).e) best = i;
    }
    const NliTriple& t = matrix.at(best, k);
    out.push_back({t.e, best, !t.entails()});
  }
  return out;
}

/// Every consecutive window of 2..gran sentences inside [0, M) that contains
/// m_idx, ordered by length and then by start.
inline std::vector<Window> expand_windows(std::size_t m, std::size_t m_idx,
                                          std::size_t gran) {
  if (m_idx >= m) throw ContractViolation("expand_windows: m_idx out of range");
  if (gran < 1) throw ContractViolation("expand_windows: gran must be >= 1");
  std::vector<Window> out;
  for (std::size_t len = 2; len <= std::min(gran, m); ++len) {
    const std::size_t first = m_idx + 1 >= len ? m_idx + 1 - len : 0;
    for (std::size_t start = first; start <= m_idx && start + len <= m; ++start) {
      Window w(len);
      for (std::size_t o = 0; o < len; ++o) w[o] = start + o;
      out.push_back(std::move(w));
    }
  }
  return out;
}

// Sentences of a window joined by single spaces.
inline std::string window_premise(const SentenceList& doc, const Window& w) {
  std::string out;
  for (std::size_t idx : w) {
    if (!out.empty()) out += ' ';
    out += doc[idx].text;
  }
  return out;
}

struct FactScore {
  std::size_t fact_index = 0;
  std::size_t base_best_index = 0;
  double base_score = 0.0;
  bool expanded = false;
  std::vector<Window> windows_tried;
  std::vector<double> window_scores;  // entailment per tried window
  double final_score = 0.0;
  Window best_window;
};

/// Re-scores facts whose best sentence is not an entailment against the
/// wider windows around it and keeps the maximum of the original and the
/// re-calculated entailment scores. Ties keep the original sentence, then
/// the earliest window.
inline std::vector<FactScore> granularity_expand(const SentenceList& doc,
                                                 const std::vector<AtomicFact>& facts,
                                                 const ScoreMatrix& matrix,
                                                 std::size_t gran, NliScorer& nli,
                                                 std::size_t workers = 1) {
  if (matrix.rows() != doc.size() || matrix.cols() != facts.size()) {
    throw ContractViolation("granularity_expand: matrix does not match inputs");
  }
  const auto base = base_vector(matrix);
  std::vector<FactScore> out(facts.size());

  struct Job {
    std::size_t fact;
    std::size_t window;
  };
  std::vector<Job> jobs;
  for (std::size_t k = 0; k < facts.size(); ++k) {
    FactScore& fs = out[k];
    fs.fact_index = k;
    fs.base_best_index = base[k].best_index;
    fs.base_score = base[k].score;
    fs.final_score = base[k].score;
    fs.best_window = {base[k].best_index};
    if (!base[k].needs_expansion) continue;
    fs.expanded = true;
    fs.windows_tried = expand_windows(doc.size(), base[k].best_index, gran);
    fs.window_scores.assign(fs.windows_tried.size(), 0.0);
    for (std::size_t w = 0; w < fs.windows_tried.size(); ++w) jobs.push_back({k, w});
  }

  parallel_for(jobs.size(), workers, [&](std::size_t j) {
    FactScore& fs = out[jobs[j].fact];
    const Window& w = fs.windows_tried[jobs[j].window];
    fs.window_scores[jobs[j].window] =
        nli.score(window_premise(doc, w), facts[jobs[j].fact].text).e;
  });

  for (auto& fs : out) {
    for (std::size_t w = 0; w < fs.windows_tried.size(); ++w) {
      if (fs.window_scores[w] > fs.final_score) {
        fs.final_score = fs.window_scores[w];
        fs.best_window = fs.windows_tried[w];
      }
    }
  }
  return out;
}

inline double fizz_score(const std::vector<double>& final_scores) {
  if (final_scores.empty()) throw EmptyFactSet("no atomic facts left to score");
  return *std::min_element(final_scores.begin(), final_scores.end());
}

inline double fizz_score(const std::vector<FactScore>& facts) {
  std::vector<double> v;
  v.reserve(facts.size());
  for (const auto& f : facts) v.push_back(f.final_score);
  return fizz_score(v);
}

}  // namespace fizz
