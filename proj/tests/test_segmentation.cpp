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

#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "fizz/segmentation.hpp"

namespace fizz {
namespace {

std::vector<std::string> texts(const SentenceList& l) { return l.texts(); }

TEST(SplitSentences, TwoTerminatedClauses) {
  EXPECT_EQ(texts(split_sentences("A. B.")), (std::vector<std::string>{"A.", "B."}));
}

TEST(SplitSentences, EmptyAndBlankInput) {
  EXPECT_TRUE(split_sentences("").empty());
  EXPECT_TRUE(split_sentences("  \n\t ").empty());
}

TEST(SplitSentences, AbbreviationGuard) {
  EXPECT_EQ(texts(split_sentences("Mr. Smith left. He ran.")),
            (std::vector<std::string>{"Mr. Smith left.", "He ran."}));
  EXPECT_EQ(texts(split_sentences("U.S. forces arrived. Dr. Lee spoke.")),
            (std::vector<std::string>{"U.S. forces arrived.", "Dr. Lee spoke."}));
}

TEST(SplitSentences, NoTerminatorIsOneSentence) {
  EXPECT_EQ(texts(split_sentences("no full stop here")),
            (std::vector<std::string>{"no full stop here"}));
}

TEST(SplitSentences, RequiresUppercaseDigitOrQuoteAfterGap) {
  EXPECT_EQ(split_sentences("it rose. then it fell.").size(), 1u);
  EXPECT_EQ(split_sentences("It rose. 2012 was good.").size(), 2u);
  EXPECT_EQ(split_sentences("He said no. \"Why?\" she asked.").size(), 2u);
  EXPECT_EQ(split_sentences("Really?! Yes.").size(), 2u);
  EXPECT_EQ(split_sentences("Value 3.5 is fine. Next.").size(), 2u);
}

TEST(SplitSentences, ClosingQuoteStaysWithSentence) {
  EXPECT_EQ(texts(split_sentences("He said \"stop.\" Then he left.")),
            (std::vector<std::string>{"He said \"stop.\"", "Then he left."}));
}

TEST(SplitSentences, CustomAbbreviationList) {
  AbbreviationList list{"approx."};
  EXPECT_EQ(split_sentences("It is approx. Ten metres.", list).size(), 1u);
  EXPECT_EQ(split_sentences("It is approx. Ten metres.", AbbreviationList{}).size(), 2u);
}

TEST(AbbreviationList, LoadsShippedFile) {
  const auto list = AbbreviationList::load(std::string(FIZZ_SOURCE_DIR) + "/data/abbreviations.txt");
  EXPECT_TRUE(list.contains("Mr."));
  EXPECT_TRUE(list.contains("u.s."));
  EXPECT_FALSE(list.contains("#"));
  EXPECT_EQ(list.size(), AbbreviationList::defaults().size());
}

TEST(AbbreviationList, MissingFileIsConfigError) {
  EXPECT_THROW(AbbreviationList::load("/nonexistent/abbrev.txt"), ConfigError);
}

TEST(CountTokens, Examples) {
  EXPECT_EQ(count_tokens(""), 0u);
  EXPECT_EQ(count_tokens("Rudd has pleaded guilty."), 4u);
  EXPECT_EQ(count_tokens("Collins became an astronaut."), 4u);
  EXPECT_EQ(count_tokens("  spaced \t out\n "), 2u);
}

// Random prose built from a small vocabulary including abbreviations,
// digits, quotes and terminators.
std::string random_text(std::mt19937_64& rng) {
  static const std::vector<std::string> words{
      "Mr.", "Smith", "left", "the", "U.S.", "in", "2012", "\"Yes\"", "he", "said",
      "Dr.", "Lee", "ran", "fast", "It", "rose", "3.5", "metres", "The", "club"};
  static const std::vector<std::string> ends{".", "!", "?", ""};
  std::uniform_int_distribution<std::size_t> w(0, words.size() - 1), e(0, ends.size() - 1),
      len(1, 6), count(0, 5);
  std::string out;
  const std::size_t sentences = count(rng);
  for (std::size_t s = 0; s < sentences; ++s) {
    const std::size_t n = len(rng);
    for (std::size_t i = 0; i < n; ++i) {
      if (!out.empty()) out += (rng() % 7 == 0) ? "  " : " ";
      out += words[w(rng)];
    }
    out += ends[e(rng)];
  }
  return out;
}

TEST(SplitSentencesProperty, OffsetsAndCoverage) {
  std::mt19937_64 rng(7);
  for (int iter = 0; iter < 2000; ++iter) {
    const auto t = random_text(rng);
    const auto list = split_sentences(t);
    std::size_t prev_end = 0;
    std::string rebuilt;
    for (const auto& s : list.sentences) {
      ASSERT_LT(s.start, s.end);
      ASSERT_GE(s.start, prev_end);
      ASSERT_EQ(t.substr(s.start, s.end - s.start), s.text) << t;
      ASSERT_FALSE(text::trim(s.text).empty());
      for (std::size_t i = prev_end; i < s.start; ++i) ASSERT_TRUE(text::is_space(t[i])) << t;
      prev_end = s.end;
    }
    for (std::size_t i = prev_end; i < t.size(); ++i) ASSERT_TRUE(text::is_space(t[i])) << t;
  }
}

TEST(SplitSentencesProperty, IdempotentOnSingleSentences) {
  std::mt19937_64 rng(11);
  for (int iter = 0; iter < 1000; ++iter) {
    for (const auto& s : split_sentences(random_text(rng)).sentences) {
      const auto again = split_sentences(s.text);
      ASSERT_EQ(again.size(), 1u) << s.text;
      ASSERT_EQ(again[0].text, s.text);
    }
  }
}

TEST(CountTokensProperty, AdditiveOverSpaceJoin) {
  std::mt19937_64 rng(3);
  for (int iter = 0; iter < 1000; ++iter) {
    const auto a = random_text(rng) + "x";
    const auto b = "y" + random_text(rng);
    ASSERT_EQ(count_tokens(a + " " + b), count_tokens(a) + count_tokens(b));
  }
}

}  // namespace
}  // namespace fizz
