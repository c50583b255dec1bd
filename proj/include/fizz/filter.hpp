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
#include <vector>

#include "fizz/decomposer.hpp"
#include "fizz/nli.hpp"
#include "fizz/parallel.hpp"
#include "fizz/segmentation.hpp"

namespace fizz {

// A fact removed by the filter, with its strongest summary evidence.
struct DroppedFact {
  AtomicFact fact;
  std::size_t best_sentence = 0;  // summary sentence with the highest e
  NliTriple best_triple;
};

struct FilterResult {
  std::vector<AtomicFact> kept;
  std::vector<DroppedFact> dropped;
};

/// Keeps a fact iff at least one summary sentence (premise) entails it
/// (hypothesis), i.e. entailment is the argmax class. Each kept fact appears
/// once and input order is preserved.
inline FilterResult filter_facts(const SentenceList& summary,
                                 const std::vector<AtomicFact>& facts,
                                 NliScorer& nli, std::size_t workers = 1) {
  const std::size_t n = summary.size();
  const std::size_t l = facts.size();
  std::vector<NliTriple> grid(n * l);
  parallel_for(n * l, workers, [&](std::size_t idx) {
    const std::size_t k = idx / n;
    const std::size_t j = idx % n;
    grid[idx] = nli.score(summary[j].text, facts[k].text);
  });

  FilterResult out;
  for (std::size_t k = 0; k < l; ++k) {
    bool keep = false;
    std::size_t best = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const NliTriple& t = grid[k * n + j];
      keep = keep || t.entails();
      if (t.e > grid[k * n + best].e) best = j;
    }
    if (keep) {
      out.kept.push_back(facts[k]);
    } else if (n > 0) {
      out.dropped.push_back({facts[k], best, grid[k * n + best]});
    } else {
      out.dropped.push_back({facts[k], 0, {}});
    }
  }
  return out;
}

}  // namespace fizz
