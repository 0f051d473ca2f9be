// Copyright 2026 The axtract Authors.
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


#include "axtract/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <set>

namespace axtract::text {

namespace {

char lower_char(char c) {
  return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
}

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

}  // namespace

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), lower_char);
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

std::string squash_whitespace(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending = false;
  for (char c : s) {
    if (is_space(c)) {
      pending = !out.empty();
      continue;
    }
    if (pending) out += ' ';
    pending = false;
    out += c;
  }
  return out;
}

bool is_word_char(char c) {
  auto u = static_cast<unsigned char>(c);
  return std::isalnum(u) != 0 || u >= 0x80;
}

std::vector<std::string> tokenize(std::string_view s) {
  std::vector<std::string> tokens;
  std::string cur;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (is_word_char(c)) {
      cur += lower_char(c);
    } else if ((c == '-' || c == '.') && !cur.empty() && i + 1 < s.size() &&
               is_word_char(s[i + 1])) {
      cur += c;
    } else if (!cur.empty()) {
      tokens.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));
  return tokens;
}

namespace {
bool joins(char c) { return c == '-' || c == '.'; }
}  // namespace

bool contains_word(std::string_view haystack, std::string_view needle) {
  if (needle.empty()) return false;
  std::size_t pos = 0;
  while ((pos = haystack.find(needle, pos)) != std::string_view::npos) {
    std::size_t end = pos + needle.size();
    bool left_ok = pos == 0 || (!is_word_char(haystack[pos - 1]) &&
                                !(joins(haystack[pos - 1]) && pos >= 2 &&
                                  is_word_char(haystack[pos - 2]) && is_word_char(needle.front())));
    bool right_ok = end == haystack.size() ||
                    (!is_word_char(haystack[end]) &&
                     !(joins(haystack[end]) && end + 1 < haystack.size() &&
                       is_word_char(haystack[end + 1]) && is_word_char(needle.back())));
    if (left_ok && right_ok) return true;
    ++pos;
  }
  return false;
}

std::string replace_all_icase(std::string_view s, std::string_view needle,
                              std::string_view replacement) {
  if (needle.empty()) return std::string(s);
  const std::string lower = to_lower(s);
  const std::string lower_needle = to_lower(needle);
  std::string out;
  std::size_t pos = 0;
  while (true) {
    std::size_t hit = lower.find(lower_needle, pos);
    if (hit == std::string::npos) break;
    out.append(s.substr(pos, hit - pos));
    out.append(replacement);
    pos = hit + needle.size();
  }
  out.append(s.substr(pos));
  return out;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      parts.emplace_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return parts;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

// English stop-word list (the common NLTK list).
const std::vector<std::string>& stop_words() {
  static const std::vector<std::string> words = {
      "a",       "about",   "above",   "after",  "again",   "against", "all",
      "am",      "an",      "and",     "any",    "are",     "as",      "at",
      "be",      "because", "been",    "before", "being",   "below",   "between",
      "both",    "but",     "by",      "can",    "did",     "do",      "does",
      "doing",   "down",    "during",  "each",   "few",     "for",     "from",
      "further", "had",     "has",     "have",   "having",  "he",      "her",
      "here",    "hers",    "herself", "him",    "himself", "his",     "how",
      "i",       "if",      "in",      "into",   "is",      "it",      "its",
      "itself",  "just",    "me",      "more",   "most",    "my",      "myself",
      "no",      "nor",     "not",     "now",    "of",      "off",     "on",
      "once",    "only",    "or",      "other",  "our",     "ours",    "ourselves",
      "out",     "over",    "own",     "same",   "she",     "should",  "so",
      "some",    "such",    "than",    "that",   "the",     "their",   "theirs",
      "them",    "themselves", "then", "there",  "these",   "they",    "this",
      "those",   "through", "to",      "too",    "under",   "until",   "up",
      "very",    "was",     "we",      "were",   "what",    "when",    "where",
      "which",   "while",   "who",     "whom",   "why",     "will",    "with",
      "you",     "your",    "yours",   "yourself", "yourselves",
  };
  return words;
}

bool is_stop_word(std::string_view lower_word) {
  static const std::set<std::string, std::less<>> set(stop_words().begin(),
                                                      stop_words().end());
  return set.contains(lower_word);
}

namespace {

bool ends_with_abbreviation(std::string_view sentence) {
  static const std::array<std::string_view, 14> abbrevs = {
      "e.g.", "i.e.", "et al.", "fig.", "tab.", "eq.", "vs.",
      "cf.",  "sec.", "resp.",  "etc.", "no.",  "approx.", "figs."};
  const std::string lower = to_lower(sentence);
  for (auto a : abbrevs) {
    if (lower.size() >= a.size() && lower.compare(lower.size() - a.size(), a.size(), a) == 0) {
      std::size_t before = lower.size() - a.size();
      if (before == 0 || !is_word_char(lower[before - 1])) return true;
    }
  }
  return false;
}

}  // namespace

std::vector<std::string> split_sentences(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    std::string t = squash_whitespace(cur);
    if (!t.empty()) out.push_back(std::move(t));
    cur.clear();
  };
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c == '\n' && i + 1 < s.size() && s[i + 1] == '\n') {
      flush();
      continue;
    }
    cur += c;
    if (c != '.' && c != '!' && c != '?') continue;
    std::size_t j = i + 1;
    if (j < s.size() && !is_space(s[j])) continue;
    while (j < s.size() && is_space(s[j])) ++j;
    if (j < s.size()) {
      auto next = static_cast<unsigned char>(s[j]);
      if (!(std::isupper(next) || std::isdigit(next) || next == '[' || next == '(')) continue;
    }
    if (c == '.' && ends_with_abbreviation(cur)) continue;
    flush();
  }
  flush();
  return out;
}

}  // namespace axtract::text
