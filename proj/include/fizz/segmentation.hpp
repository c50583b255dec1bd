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
#include <initializer_list>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "fizz/errors.hpp"

namespace fizz {

namespace text {

inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

inline bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
inline bool is_digit(char c) { return c >= '0' && c <= '9'; }

inline char to_lower(char c) {
  return is_upper(c) ? static_cast<char>(c - 'A' + 'a') : c;
}

inline char to_upper(char c) {
  return (c >= 'a' && c <= 'z') ? static_cast<char>(c - 'a' + 'A') : c;
}

inline std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = to_lower(c);
  return out;
}

inline std::string_view trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return s.substr(b, e - b);
}

inline std::vector<std::string_view> whitespace_tokens(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    std::size_t start = i;
    while (i < s.size() && !is_space(s[i])) ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

// Opening quote at s[i]: ASCII ' or ", or UTF-8 left/right curly quotes.
inline std::size_t quote_length(std::string_view s, std::size_t i) {
  if (i >= s.size()) return 0;
  if (s[i] == '"' || s[i] == '\'') return 1;
  if (i + 2 < s.size() && static_cast<unsigned char>(s[i]) == 0xE2 &&
      static_cast<unsigned char>(s[i + 1]) == 0x80) {
    const auto third = static_cast<unsigned char>(s[i + 2]);
    if (third >= 0x98 && third <= 0x9D) return 3;
  }
  return 0;
}

inline bool is_terminator(char c) { return c == '.' || c == '!' || c == '?'; }

}  // namespace text

struct Sentence {
  std::string text;
  std::size_t start = 0;  // byte offset into the source text
  std::size_t end = 0;    // one past the last byte

  friend bool operator==(const Sentence&, const Sentence&) = default;
};

struct SentenceList {
  std::string source_text;
  std::vector<Sentence> sentences;

  std::size_t size() const noexcept { return sentences.size(); }
  bool empty() const noexcept { return sentences.empty(); }
  const Sentence& operator[](std::size_t i) const { return sentences[i]; }

  std::vector<std::string> texts() const {
    std::vector<std::string> out;
    out.reserve(sentences.size());
    for (const auto& s : sentences) out.push_back(s.text);
    return out;
  }
};

/// Tokens ending in '.' that must not be treated as sentence ends.
///
/// Matching is case-insensitive on the whole whitespace-delimited token that
/// carries the period, with leading quotes and brackets stripped.
class AbbreviationList {
 public:
  AbbreviationList() = default;
  AbbreviationList(std::initializer_list<std::string_view> entries) {
    for (auto e : entries) add(e);
  }

  // The list shipped in data/abbreviations.txt, compiled in.
  static const AbbreviationList& defaults() {
    static const AbbreviationList list{
        "Mr.",  "Mrs.", "Ms.",   "Dr.",   "Prof.", "Sr.",  "Jr.",  "St.",
        "Mt.",  "Gen.", "Col.",  "Lt.",   "Sgt.",  "Capt.", "Gov.", "Sen.",
        "Rep.", "Rev.", "Hon.",  "U.S.",  "U.K.",  "U.N.", "E.U.", "Inc.",
        "Ltd.", "Co.",  "Corp.", "vs.",   "etc.",  "e.g.", "i.e.",
        "Jan.", "Feb.", "Mar.",  "Apr.",  "Aug.",  "Sept.", "Sep.", "Oct.",
        "Nov.", "Dec."};
    return list;
  }

  // One abbreviation per line; '#' starts a comment; blank lines ignored.
  static AbbreviationList load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open abbreviation list: " + path);
    AbbreviationList list;
    std::string line;
    while (std::getline(in, line)) {
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      auto entry = text::trim(line);
      if (!entry.empty()) list.add(entry);
    }
    return list;
  }

  void add(std::string_view entry) { entries_.insert(text::lower(entry)); }

  void merge(const AbbreviationList& other) {
    entries_.insert(other.entries_.begin(), other.entries_.end());
  }

  bool contains(std::string_view token) const {
    return entries_.count(text::lower(token)) > 0;
  }

  std::size_t size() const noexcept { return entries_.size(); }

 private:
  std::unordered_set<std::string> entries_;
};

/// Splits text into sentences.
///
/// A boundary is a run of '.', '!' or '?' (optionally followed by closing
/// quotes or brackets) that is followed by whitespace and then an uppercase
/// ASCII letter, a digit, or an opening quote. A period whose token is on the
/// abbreviation list never ends a sentence. Offsets are byte offsets.
inline SentenceList split_sentences(
    std::string_view input,
    const AbbreviationList& abbreviations = AbbreviationList::defaults()) {
  SentenceList out;
  out.source_text = std::string(input);
  const std::string_view s = out.source_text;

  auto push = [&](std::size_t b, std::size_t e) {
    while (b < e && text::is_space(s[b])) ++b;
    while (e > b && text::is_space(s[e - 1])) --e;
    if (e > b) out.sentences.push_back({std::string(s.substr(b, e - b)), b, e});
  };

  std::size_t start = 0;
  std::size_t i = 0;
  while (i < s.size()) {
    if (!text::is_terminator(s[i])) {
      ++i;
      continue;
    }
    std::size_t end = i;
    while (end < s.size() && text::is_terminator(s[end])) ++end;
    while (end < s.size()) {
      const char c = s[end];
      if (c == ')' || c == ']' || c == '"' || c == '\'') {
        ++end;
      } else if (auto q = text::quote_length(s, end); q == 3) {
        end += q;
      } else {
        break;
      }
    }
    std::size_t next = end;
    while (next < s.size() && text::is_space(s[next])) ++next;
    const bool has_gap = next > end;
    const bool opens_sentence =
        next < s.size() && (text::is_upper(s[next]) || text::is_digit(s[next]) ||
                            text::quote_length(s, next) > 0);
    bool abbreviation = false;
    if (s[i] == '.') {
      std::size_t tok = i;
      while (tok > start && !text::is_space(s[tok - 1])) --tok;
      while (tok < i && (s[tok] == '(' || s[tok] == '[' ||
                         text::quote_length(s, tok) > 0)) {
        tok += std::max<std::size_t>(1, text::quote_length(s, tok));
      }
      abbreviation = abbreviations.contains(s.substr(tok, i + 1 - tok));
    }
    if (has_gap && opens_sentence && !abbreviation) {
      push(start, end);
      start = end;
      i = next;
    } else {
      i = end;
    }
  }
  push(start, s.size());
  return out;
}

/// Number of whitespace-delimited tokens.
inline std::size_t count_tokens(std::string_view s) {
  return text::whitespace_tokens(s).size();
}

}  // namespace fizz
