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

#include <array>
#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "fizz/errors.hpp"
#include "fizz/llm.hpp"
#include "fizz/parallel.hpp"
#include "fizz/retry.hpp"
#include "fizz/segmentation.hpp"

namespace fizz {

struct AtomicFact {
  std::string text;
  std::size_t source_sentence_index = 0;
  std::string raw_line;

  friend bool operator==(const AtomicFact&, const AtomicFact&) = default;
};

namespace prompt {

struct Shot {
  std::string_view sentence;
  std::vector<std::string_view> facts;
};

inline constexpr std::string_view kPreamble =
    "You are a helpful assistant. Please give me a list of atomic facts of "
    "the following texts.";

// The eight in-context demonstrations, in order.
inline const std::vector<Shot>& shots() {
  static const std::vector<Shot> kShots{
      {"lisa courtney, of hertfordshire, has spent most of her life "
       "collecting pokemon memorabilia.",
       {"Lisa Courtney is from Hertfordshire.",
        "Lisa Courtney has spent most of her life collecting Pokémon "
        "memorabilia."}},
      {"prince jan zylinski said he was fed up with discrimination against "
       "poles living in britain.",
       {"Prince Jan Zylinski made a statement.",
        "The statement made by Prince Jan Zylinski was about discrimination.",
        "The statement made by Prince Jan Zylinski was regarding Poles living "
        "in Britain.",
        "Prince Jan Zylinski expressed feeling fed up with this type of "
        "discrimination."}},
      {"no charges were filed, there will be no travel ban.",
       {"No charges were filed.", "There will be no travel ban."}},
      {"rudd has pleaded guilty to threatening to kill and possession of "
       "drugs in a court.",
       {"Rudd has pleaded guilty.", "Rudd has pleaded guilty to threatening to kill.",
        "Rudd has pleaded guilty to possession of drugs."}},
      {"Lee made his acting debut in the film The Moon is the Sun's Dream "
       "(1992), and continued to appear in small and supporting roles "
       "throughout the 1990s.",
       {"Lee made his acting debut in The Moon is the Sun's Dream.",
        "The Moon is the Sun's Dream is a film.",
        "The Moon is the Sun's Dream was released in 1992.",
        "After Lee's acting debut, he appeared in small and supporting roles "
        "throughout the 1990s."}},
      {"In 1963, Collins became one of the third group of astronauts selected "
       "by NASA and he served as the back-up Command Module Pilot for the "
       "Gemini 7 mission.",
       {"Collins became an astronaut.",
        "Collins became one of the third group of astronauts selected by NASA "
        "in 1963.",
        "Collins served as the back-up Command Module Pilot for the Gemini 7 "
        "mission."}},
      {"In addition to his acting roles, Bateman has written and directed two "
       "short films and is currently in development on his feature debut.",
       {"Bateman has acting roles.", "Bateman has written two short films.",
        "Bateman has directed two short films.",
        "Bateman is currently in development on his feature debut."}},
      {"Michael Collins (born October 31, 1930) is a retired American "
       "astronaut and test pilot who was the Command Module Pilot for the "
       "Apollo 11 mission in 1969.",
       {"Michael Collins was born on October 31, 1930.",
        "Michael Collins is retired.", "Michael Collins is an American.",
        "Michael Collins was an astronaut.", "Michael Collins was a test pilot.",
        "Michael Collins was the Command Module Pilot for the Apollo 11 "
        "mission in 1969."}},
  };
  return kShots;
}

}  // namespace prompt

/// The 8-shot decomposition prompt with `sentence` on the final line.
inline std::string build_prompt(std::string_view sentence) {
  std::string out(prompt::kPreamble);
  out += "\n\n";
  for (const auto& shot : prompt::shots()) {
    out += shot.sentence;
    out += '\n';
    for (auto f : shot.facts) {
      out += "- ";
      out += f;
      out += '\n';
    }
    out += '\n';
  }
  out += sentence;
  out += '\n';
  return out;
}

/// Every line that starts with "- " after trimming becomes a fact, in
/// order; other lines are ignored and exact duplicates dropped.
inline std::vector<AtomicFact> parse_fact_list(std::string_view completion,
                                               std::size_t sentence_index) {
  std::vector<AtomicFact> out;
  std::unordered_set<std::string> seen;
  std::size_t pos = 0;
  while (pos <= completion.size()) {
    auto nl = completion.find('\n', pos);
    if (nl == std::string_view::npos) nl = completion.size();
    const auto raw = completion.substr(pos, nl - pos);
    pos = nl + 1;
    const auto line = text::trim(raw);
    if (line.size() < 2 || line[0] != '-' || line[1] != ' ') continue;
    const auto fact = text::trim(line.substr(2));
    if (fact.empty()) continue;
    if (!seen.insert(std::string(fact)).second) continue;
    out.push_back({std::string(fact), sentence_index, std::string(raw)});
  }
  if (out.empty()) throw DecompositionEmpty(std::string(completion), sentence_index);
  return out;
}

struct DecomposeOptions {
  std::size_t max_in_flight = 4;
  int max_tokens = 512;
  RetryPolicy retry{};
};

struct Decomposition {
  std::vector<AtomicFact> facts;
  std::vector<std::string> completions;  // raw completion per summary sentence
};

/// Decomposes every summary sentence and concatenates the facts in sentence
/// order. A sentence that still fails after retries aborts the whole call.
inline Decomposition decompose_detailed(const SentenceList& summary, LlmClient& llm,
                                        const DecomposeOptions& options = {}) {
  if (summary.empty()) throw ContractViolation("decompose: empty summary");
  const std::size_t n = summary.size();
  std::vector<std::string> completions(n);
  std::vector<std::vector<AtomicFact>> per_sentence(n);

  parallel_for(n, options.max_in_flight, [&](std::size_t j) {
    const auto sentence = text::trim(summary[j].text);
    if (sentence.empty()) throw ContractViolation("decompose: empty sentence");
    LlmRequest request{build_prompt(sentence), options.max_tokens, 0.0};
    try {
      completions[j] = with_retry(options.retry, [&] { return llm.complete(request); })
                           .completion;
    } catch (const TransportError& e) {
      throw DecompositionFailed("summary sentence " + std::to_string(j) +
                                ": " + e.what());
    }
    per_sentence[j] = parse_fact_list(completions[j], j);
  });

  Decomposition out;
  out.completions = std::move(completions);
  for (auto& facts : per_sentence) {
    for (auto& f : facts) out.facts.push_back(std::move(f));
  }
  return out;
}

inline std::vector<AtomicFact> decompose(const SentenceList& summary, LlmClient& llm,
                                         const DecomposeOptions& options = {}) {
  return decompose_detailed(summary, llm, options).facts;
}

}  // namespace fizz
