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
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "fizz/errors.hpp"
#include "fizz/segmentation.hpp"

namespace fizz {

enum class MentionKind { Pronoun, ProperName, Nominal };

inline std::string_view to_string(MentionKind k) {
  switch (k) {
    case MentionKind::Pronoun:
      return "PRONOUN";
    case MentionKind::ProperName:
      return "PROPER_NAME";
    case MentionKind::Nominal:
      return "NOMINAL";
  }
  return "?";
}

inline MentionKind mention_kind_from_string(std::string_view s) {
  if (s == "PRONOUN") return MentionKind::Pronoun;
  if (s == "PROPER_NAME") return MentionKind::ProperName;
  if (s == "NOMINAL") return MentionKind::Nominal;
  throw ValidationError("unknown mention kind: " + std::string(s));
}

// Closed lexicon of English personal, possessive and reflexive pronouns.
inline bool is_pronoun(std::string_view surface) {
  static const std::unordered_set<std::string> lexicon{
      "i",     "me",     "my",     "mine",   "myself",   "we",
      "us",    "our",    "ours",   "ourselves", "you",  "your",
      "yours", "yourself", "yourselves", "he", "him",   "his",
      "himself", "she",  "her",    "hers",   "herself", "it",
      "its",   "itself", "they",   "them",   "their",   "theirs",
      "themselves"};
  return lexicon.count(text::lower(surface)) > 0;
}

struct Mention {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string surface;
  MentionKind kind = MentionKind::Nominal;
  bool possessive = false;

  friend bool operator==(const Mention&, const Mention&) = default;
};

/// One entity chain. `name` is an optional entity name supplied by the
/// cluster producer; when set it is used as the representative string even
/// if it never occurs in the text.
struct Cluster {
  std::vector<Mention> mentions;
  std::optional<std::string> name;
};

struct CorefClusterSet {
  std::string text;
  std::vector<Cluster> clusters;
};

struct Substitution {
  std::size_t start = 0;  // span in the original text
  std::size_t end = 0;
  std::string original;
  std::string replacement;
  std::string rule;  // "pronoun", "possessive" or "nominal_prefix"
};

struct ResolvedText {
  std::string original;
  std::string text;
  std::vector<Substitution> substitutions;  // ascending by start
};

/// Builds a mention over text[start, end), checking the span and that the
/// kind agrees with the pronoun lexicon.
inline Mention make_mention(std::string_view text, std::size_t start,
                            std::size_t end, MentionKind kind,
                            bool possessive = false) {
  if (start >= end || end > text.size()) {
    throw ValidationError("mention span [" + std::to_string(start) + ", " +
                          std::to_string(end) + ") is empty or out of range");
  }
  Mention m{start, end, std::string(text.substr(start, end - start)), kind,
            possessive};
  if ((kind == MentionKind::Pronoun) != is_pronoun(m.surface)) {
    throw ValidationError("mention \"" + m.surface + "\" tagged " +
                          std::string(to_string(kind)) +
                          " disagrees with the pronoun lexicon");
  }
  return m;
}

/// Checks every CorefClusterSet invariant: spans in range and matching
/// surfaces, non-empty clusters, and no two mentions overlapping anywhere.
inline void validate(const CorefClusterSet& set) {
  std::vector<const Mention*> all;
  for (std::size_t c = 0; c < set.clusters.size(); ++c) {
    if (set.clusters[c].mentions.empty()) {
      throw ValidationError("cluster " + std::to_string(c) + " is empty");
    }
    for (const auto& m : set.clusters[c].mentions) {
      if (m.start >= m.end || m.end > set.text.size() ||
          set.text.compare(m.start, m.end - m.start, m.surface) != 0) {
        throw ValidationError("mention \"" + m.surface + "\" at [" +
                              std::to_string(m.start) + ", " +
                              std::to_string(m.end) +
                              ") does not match the text");
      }
      if ((m.kind == MentionKind::Pronoun) != is_pronoun(m.surface)) {
        throw ValidationError("mention \"" + m.surface +
                              "\" kind disagrees with the pronoun lexicon");
      }
      all.push_back(&m);
    }
  }
  std::sort(all.begin(), all.end(),
            [](const Mention* a, const Mention* b) { return a->start < b->start; });
  for (std::size_t i = 1; i < all.size(); ++i) {
    if (all[i]->start < all[i - 1]->end) {
      throw ValidationError(
          "overlapping mentions [" + std::to_string(all[i - 1]->start) + ", " +
          std::to_string(all[i - 1]->end) + ") and [" +
          std::to_string(all[i]->start) + ", " + std::to_string(all[i]->end) +
          ")");
    }
  }
}

/// Longest PROPER_NAME (earliest on ties); else earliest NOMINAL; else the
/// earliest mention, which leaves an all-pronoun cluster unresolvable.
inline const Mention& select_representative(const std::vector<Mention>& cluster) {
  if (cluster.empty()) {
    throw ContractViolation("select_representative: empty cluster");
  }
  const Mention* best = nullptr;
  for (const auto& m : cluster) {
    if (m.kind != MentionKind::ProperName) continue;
    if (!best || m.surface.size() > best->surface.size() ||
        (m.surface.size() == best->surface.size() && m.start < best->start)) {
      best = &m;
    }
  }
  if (best) return *best;
  for (const auto& m : cluster) {
    if (m.kind == MentionKind::Nominal && (!best || m.start < best->start)) {
      best = &m;
    }
  }
  if (best) return *best;
  return *std::min_element(cluster.begin(), cluster.end(),
                           [](const Mention& a, const Mention& b) {
                             return a.start < b.start;
                           });
}

namespace detail {

// True when only whitespace or opening quotes/brackets separate pos from the
// start of the text or from a sentence terminator.
inline bool sentence_initial(std::string_view text, std::size_t pos) {
  while (pos > 0) {
    const char c = text[pos - 1];
    if (text::is_space(c) || c == '"' || c == '\'' || c == '(' || c == '[') {
      --pos;
    } else {
      return text::is_terminator(c);
    }
  }
  return true;
}

inline std::string with_first(std::string s, bool upper) {
  if (!s.empty()) s[0] = upper ? text::to_upper(s[0]) : text::to_lower(s[0]);
  return s;
}

}  // namespace detail

/// Rewrites text so every resolvable cluster's pronouns name the entity.
///
/// Pronouns become the representative (possessives get "'s"); nominal
/// mentions other than the representative are prefixed with
/// "<representative>, " and their first letter lower-cased; proper names
/// stay. A nominal already preceded by that prefix is left alone, which makes
/// resolution idempotent on its own output.
inline ResolvedText resolve(std::string_view text, const CorefClusterSet& clusters) {
  if (clusters.text != text) {
    throw ContractViolation("resolve: cluster set was built for different text");
  }
  validate(clusters);

  ResolvedText out;
  out.original = std::string(text);
  for (const auto& cluster : clusters.clusters) {
    const Mention& rep = select_representative(cluster.mentions);
    if (!cluster.name && rep.kind == MentionKind::Pronoun) continue;
    const std::string name = cluster.name ? *cluster.name : rep.surface;
    const bool name_is_nominal = !cluster.name && rep.kind == MentionKind::Nominal;
    const std::string name_folded = text::lower(name);

    for (const auto& m : cluster.mentions) {
      if (m.kind == MentionKind::ProperName) continue;
      const bool initial = detail::sentence_initial(text, m.start);
      std::string head = name;
      if (initial) {
        head = detail::with_first(head, true);
      } else if (name_is_nominal) {
        head = detail::with_first(head, false);
      }
      if (m.kind == MentionKind::Pronoun) {
        out.substitutions.push_back(
            {m.start, m.end, m.surface, m.possessive ? head + "'s" : head,
             m.possessive ? "possessive" : "pronoun"});
        continue;
      }
      if (text::lower(m.surface) == name_folded) continue;
      const std::string prefix = name + ", ";
      if (m.start >= prefix.size() &&
          text::lower(text.substr(m.start - prefix.size(), prefix.size())) ==
              text::lower(prefix)) {
        continue;
      }
      out.substitutions.push_back({m.start, m.end, m.surface,
                                   head + ", " + detail::with_first(m.surface, false),
                                   "nominal_prefix"});
    }
  }
  std::sort(out.substitutions.begin(), out.substitutions.end(),
            [](const Substitution& a, const Substitution& b) {
              return a.start < b.start;
            });

  out.text = std::string(text);
  for (auto it = out.substitutions.rbegin(); it != out.substitutions.rend(); ++it) {
    out.text.replace(it->start, it->end - it->start, it->replacement);
  }
  return out;
}

inline ResolvedText resolve(const CorefClusterSet& clusters) {
  return resolve(clusters.text, clusters);
}

/// Replays recorded substitutions over the original text.
inline std::string apply_substitutions(std::string_view original,
                                       const std::vector<Substitution>& subs) {
  std::string out(original);
  auto sorted = subs;
  std::sort(sorted.begin(), sorted.end(),
            [](const Substitution& a, const Substitution& b) {
              return a.start > b.start;
            });
  for (const auto& s : sorted) {
    if (s.end > out.size() || out.compare(s.start, s.end - s.start, s.original) != 0) {
      throw ValidationError("substitution \"" + s.original +
                            "\" does not match the original text");
    }
    out.replace(s.start, s.end - s.start, s.replacement);
  }
  return out;
}

/// Clusters over the resolved text: each substituted mention reappears at
/// its shifted position with the representative's kind (pronouns) or as the
/// prefixed nominal; untouched mentions are shifted.
inline CorefClusterSet induced_clusters(const CorefClusterSet& source,
                                        const ResolvedText& resolved) {
  auto shift = [&](std::size_t pos) {
    long delta = 0;
    for (const auto& s : resolved.substitutions) {
      if (s.end <= pos) {
        delta += static_cast<long>(s.replacement.size()) -
                 static_cast<long>(s.end - s.start);
      }
    }
    return static_cast<std::size_t>(static_cast<long>(pos) + delta);
  };
  auto find_sub = [&](const Mention& m) -> const Substitution* {
    for (const auto& s : resolved.substitutions) {
      if (s.start == m.start && s.end == m.end) return &s;
    }
    return nullptr;
  };

  CorefClusterSet out;
  out.text = resolved.text;
  for (const auto& cluster : source.clusters) {
    Cluster c;
    c.name = cluster.name;
    const Mention& rep = select_representative(cluster.mentions);
    const MentionKind name_kind =
        cluster.name ? MentionKind::ProperName : rep.kind;
    for (const auto& m : cluster.mentions) {
      const std::size_t start = shift(m.start);
      const Substitution* sub = find_sub(m);
      if (!sub) {
        c.mentions.push_back(make_mention(out.text, start,
                                          start + (m.end - m.start), m.kind,
                                          m.possessive));
      } else if (sub->rule == "nominal_prefix") {
        const std::size_t len = m.end - m.start;
        const std::size_t nominal_start = start + sub->replacement.size() - len;
        c.mentions.push_back(make_mention(out.text, nominal_start,
                                          nominal_start + len, m.kind));
      } else {
        std::size_t len = sub->replacement.size();
        if (sub->rule == "possessive") len -= 2;
        c.mentions.push_back(make_mention(out.text, start, start + len,
                                          name_kind));
      }
    }
    out.clusters.push_back(std::move(c));
  }
  return out;
}

// JSON wire format:
//   {"text": str, "clusters": [[{"start", "end", "kind", "possessive"}, ...]]}
// A cluster may also be an object {"name": str, "mentions": [...]}.
inline CorefClusterSet cluster_set_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("text") || !j.at("text").is_string() ||
      !j.contains("clusters") || !j.at("clusters").is_array()) {
    throw ValidationError("cluster set needs a string \"text\" and an array \"clusters\"");
  }
  CorefClusterSet set;
  set.text = j.at("text").get<std::string>();
  for (const auto& jc : j.at("clusters")) {
    Cluster c;
    const nlohmann::json* mentions = &jc;
    if (jc.is_object()) {
      if (jc.contains("name") && !jc.at("name").is_null()) {
        c.name = jc.at("name").get<std::string>();
      }
      mentions = &jc.at("mentions");
    }
    if (!mentions->is_array()) throw ValidationError("cluster must be an array of mentions");
    for (const auto& jm : *mentions) {
      try {
        c.mentions.push_back(make_mention(
            set.text, jm.at("start").get<std::size_t>(),
            jm.at("end").get<std::size_t>(),
            mention_kind_from_string(jm.at("kind").get<std::string>()),
            jm.value("possessive", false)));
      } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("malformed mention: ") + e.what());
      }
    }
    set.clusters.push_back(std::move(c));
  }
  validate(set);
  return set;
}

inline nlohmann::ordered_json to_json(const CorefClusterSet& set) {
  nlohmann::ordered_json j;
  j["text"] = set.text;
  j["clusters"] = nlohmann::ordered_json::array();
  for (const auto& c : set.clusters) {
    nlohmann::ordered_json mentions = nlohmann::ordered_json::array();
    for (const auto& m : c.mentions) {
      mentions.push_back({{"start", m.start},
                          {"end", m.end},
                          {"kind", to_string(m.kind)},
                          {"possessive", m.possessive}});
    }
    if (c.name) {
      j["clusters"].push_back({{"name", *c.name}, {"mentions", mentions}});
    } else {
      j["clusters"].push_back(mentions);
    }
  }
  return j;
}

inline nlohmann::ordered_json to_json(const Substitution& s) {
  return {{"start", s.start},
          {"end", s.end},
          {"original", s.original},
          {"replacement", s.replacement},
          {"rule", s.rule}};
}

}  // namespace fizz
