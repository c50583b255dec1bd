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

#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "fizz/coref.hpp"

namespace fizz {
namespace {

Mention mention(std::string_view text, std::string_view surface, MentionKind kind,
                bool possessive = false, std::size_t from = 0) {
  const auto start = std::string_view(text).find(surface, from);
  EXPECT_NE(start, std::string_view::npos) << surface;
  return make_mention(text, start, start + surface.size(), kind, possessive);
}

constexpr auto kPronoun = MentionKind::Pronoun;
constexpr auto kProper = MentionKind::ProperName;
constexpr auto kNominal = MentionKind::Nominal;

TEST(SelectRepresentative, PrefersProperNameOverPronoun) {
  const std::string t = "he said Chris Gunter";
  std::vector<Mention> c{mention(t, "he", kPronoun), mention(t, "Chris Gunter", kProper)};
  EXPECT_EQ(select_representative(c).surface, "Chris Gunter");
}

TEST(SelectRepresentative, SingletonNominal) {
  const std::string t = "the mass";
  EXPECT_EQ(select_representative({mention(t, "the mass", kNominal)}).surface, "the mass");
}

TEST(SelectRepresentative, LongestProperName) {
  const std::string t = "Lee and Lee Byung-hun";
  std::vector<Mention> c{mention(t, "Lee", kProper), mention(t, "Lee Byung-hun", kProper)};
  EXPECT_EQ(select_representative(c).surface, "Lee Byung-hun");
}

TEST(SelectRepresentative, EarliestNominalThenEarliestMention) {
  const std::string t = "it was the rock and the mass";
  std::vector<Mention> nominals{mention(t, "the mass", kNominal), mention(t, "the rock", kNominal),
                                mention(t, "it", kPronoun)};
  EXPECT_EQ(select_representative(nominals).surface, "the rock");
  const std::string p = "He said he";
  std::vector<Mention> pronouns{mention(p, "he", kPronoun, false, 3), mention(p, "He", kPronoun)};
  EXPECT_EQ(select_representative(pronouns).start, 0u);
}

TEST(SelectRepresentative, EmptyClusterIsContractViolation) {
  EXPECT_THROW(select_representative({}), ContractViolation);
}

TEST(Resolve, NominalPrefixWithEntityName) {
  const std::string t = "The 27-year-old joined spurs from manchester city in 2011.";
  CorefClusterSet set{t, {{{mention(t, "The 27-year-old", kNominal)}, "Emmanuel Adebayor"}}};
  const auto r = resolve(t, set);
  EXPECT_EQ(r.text, "Emmanuel Adebayor, the 27-year-old joined spurs from manchester city in 2011.");
  ASSERT_EQ(r.substitutions.size(), 1u);
  EXPECT_EQ(r.substitutions[0].rule, "nominal_prefix");
}

TEST(Resolve, EmptyClusterSetIsIdentity) {
  const std::string t = "Nothing to resolve here. He left.";
  const auto r = resolve(t, CorefClusterSet{t, {}});
  EXPECT_EQ(r.text, t);
  EXPECT_TRUE(r.substitutions.empty());
}

TEST(Resolve, PossessivePronoun) {
  const std::string t = "He scored. His goal counted.";
  CorefClusterSet set{t, {{{mention(t, "He", kPronoun), mention(t, "His", kPronoun, true)}, "Bale"}}};
  const auto r = resolve(t, set);
  EXPECT_EQ(r.text, "Bale scored. Bale's goal counted.");
  EXPECT_EQ(apply_substitutions(t, r.substitutions), r.text);
}

TEST(Resolve, ClusterSetMustMatchText) {
  EXPECT_THROW(resolve("a", CorefClusterSet{"b", {}}), ContractViolation);
}

TEST(Resolve, OverlappingMentionsNameBothSpans) {
  const std::string t = "Gareth Bale scored.";
  CorefClusterSet set{t, {{{make_mention(t, 0, 11, kProper)}, {}},
                          {{make_mention(t, 7, 18, kNominal)}, {}}}};
  try {
    resolve(t, set);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("[0, 11)"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("[7, 18)"), std::string::npos) << e.what();
  }
}

TEST(Resolve, KindMustAgreeWithLexicon) {
  EXPECT_THROW(make_mention("Bale scored", 0, 4, kPronoun), ValidationError);
  EXPECT_THROW(make_mention("He scored", 0, 2, kProper), ValidationError);
  EXPECT_THROW(make_mention("He scored", 3, 3, kNominal), ValidationError);
}

TEST(ClusterJson, ParsesBothClusterShapes) {
  const auto j = nlohmann::json::parse(R"({
    "text": "He scored. Bale won.",
    "clusters": [
      [{"start": 0, "end": 2, "kind": "PRONOUN", "possessive": false},
       {"start": 11, "end": 15, "kind": "PROPER_NAME", "possessive": false}],
      {"name": "Wales", "mentions": [{"start": 16, "end": 19, "kind": "NOMINAL"}]}
    ]})");
  const auto set = cluster_set_from_json(j);
  ASSERT_EQ(set.clusters.size(), 2u);
  EXPECT_EQ(set.clusters[0].mentions[1].surface, "Bale");
  EXPECT_EQ(set.clusters[1].name.value(), "Wales");
  EXPECT_EQ(cluster_set_from_json(nlohmann::json::parse(to_json(set).dump())).clusters.size(), 2u);
}

TEST(ClusterJson, RejectsBadSchema) {
  EXPECT_THROW(cluster_set_from_json(nlohmann::json::parse(R"({"clusters": []})")), ValidationError);
  EXPECT_THROW(cluster_set_from_json(nlohmann::json::parse(
                   R"({"text": "ab", "clusters": [[{"start": 0, "end": 9, "kind": "NOMINAL"}]]})")),
               ValidationError);
  EXPECT_THROW(cluster_set_from_json(nlohmann::json::parse(R"({"text": "ab", "clusters": [[]]})")),
               ValidationError);
}

// Random texts: sentences about up to three entities, each mentioned by
// name, pronoun, possessive pronoun, or a nominal description.
struct Generated {
  CorefClusterSet set;
};

Generated random_fixture(std::mt19937_64& rng) {
  struct Entity {
    std::string name, nominal;
  };
  static const std::vector<Entity> entities{
      {"Gareth Bale", "the winger"}, {"Anna Smith", "the minister"}, {"Reading", "the club"}};
  static const std::vector<std::string> verbs{"scored", "spoke", "won", "left early"};
  std::uniform_int_distribution<std::size_t> pick_e(0, entities.size() - 1), pick_v(0, verbs.size() - 1),
      pick_form(0, 3), count(1, 6);
  std::string text;
  std::vector<std::vector<Mention>> by_entity(entities.size());
  std::vector<bool> named(entities.size(), false);
  const std::size_t n = count(rng);
  for (std::size_t s = 0; s < n; ++s) {
    if (!text.empty()) text += ' ';
    const std::size_t e = pick_e(rng);
    std::size_t form = pick_form(rng);
    std::string surface;
    MentionKind kind = kProper;
    bool possessive = false;
    switch (form) {
      case 0: surface = entities[e].name; kind = kProper; break;
      case 1: surface = "It"; kind = kPronoun; break;
      case 2: surface = "Its"; kind = kPronoun; possessive = true; break;
      default: surface = "The" + entities[e].nominal.substr(3); kind = kNominal; break;
    }
    const std::size_t start = text.size();
    text += surface;
    by_entity[e].push_back({start, start + surface.size(), surface, kind, possessive});
    text += possessive ? " team " : " ";
    text += verbs[pick_v(rng)] + ".";
    named[e] = named[e] || form == 0;
  }
  Generated g;
  g.set.text = text;
  for (std::size_t e = 0; e < entities.size(); ++e) {
    if (by_entity[e].empty()) continue;
    Cluster c{by_entity[e], {}};
    if (!named[e] && rng() % 2 == 0) c.name = entities[e].name;
    g.set.clusters.push_back(std::move(c));
  }
  return g;
}

TEST(ResolveProperty, ReplayIdempotenceAndNoSurvivingPronouns) {
  std::mt19937_64 rng(2024);
  for (int iter = 0; iter < 3000; ++iter) {
    const auto g = random_fixture(rng);
    const auto r = resolve(g.set);
    ASSERT_EQ(apply_substitutions(g.set.text, r.substitutions), r.text) << g.set.text;

    const auto induced = induced_clusters(g.set, r);
    ASSERT_NO_THROW(validate(induced)) << r.text;
    for (std::size_t c = 0; c < induced.clusters.size(); ++c) {
      const auto& src = g.set.clusters[c];
      const bool resolvable =
          src.name || select_representative(src.mentions).kind != kPronoun;
      if (!resolvable) continue;
      for (const auto& m : induced.clusters[c].mentions) {
        ASSERT_NE(m.kind, kPronoun) << r.text;
      }
    }
    const auto again = resolve(induced);
    ASSERT_EQ(again.text, r.text) << g.set.text;
    ASSERT_TRUE(again.substitutions.empty()) << g.set.text;
  }
}

}  // namespace
}  // namespace fizz
