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


#include <algorithm>
#include <cctype>
#include <map>
#include <optional>

#include "axtract/taxonomy.hpp"
#include "axtract/text.hpp"

namespace axtract {

namespace {

bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

char lower(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

bool valid_short_form(std::string_view sf) {
  if (sf.size() < 2 || sf.size() > 10) return false;
  if (!is_alnum(sf.front())) return false;
  if (std::none_of(sf.begin(), sf.end(), [](char c) { return std::isalpha(static_cast<unsigned char>(c)); })) {
    return false;
  }
  return std::count(sf.begin(), sf.end(), ' ') <= 1;
}

// Right-to-left alignment of short-form characters inside the candidate long
// form. The first short-form character must start a word.
std::optional<std::string> best_long_form(std::string_view sf, std::string_view lf) {
  long s = static_cast<long>(sf.size()) - 1;
  long l = static_cast<long>(lf.size()) - 1;
  while (s >= 0) {
    char c = lower(sf[static_cast<std::size_t>(s)]);
    if (!is_alnum(c)) {
      --s;
      continue;
    }
    while (l >= 0 && (lower(lf[static_cast<std::size_t>(l)]) != c ||
                      (s == 0 && l > 0 && is_alnum(lf[static_cast<std::size_t>(l - 1)])))) {
      --l;
    }
    if (l < 0) return std::nullopt;
    --l;
    --s;
  }
  std::size_t start = lf.rfind(' ', static_cast<std::size_t>(l + 1));
  start = start == std::string_view::npos ? 0 : start + 1;
  if (l < 0) start = 0;
  return text::trim(lf.substr(start));
}

std::size_t count_words(std::string_view s) {
  std::size_t n = 0;
  bool in = false;
  for (char c : s) {
    bool space = std::isspace(static_cast<unsigned char>(c)) != 0;
    if (!space && !in) ++n;
    in = !space;
  }
  return n;
}

void scan(std::string_view text, std::map<std::pair<std::string, std::string>, std::size_t>& found) {
  std::size_t pos = 0;
  while ((pos = text.find('(', pos)) != std::string_view::npos) {
    std::size_t close = text.find(')', pos + 1);
    if (close == std::string_view::npos) break;
    std::string sf = text::trim(text.substr(pos + 1, close - pos - 1));
    std::size_t open_at = pos;
    pos = close + 1;
    if (sf.find('(') != std::string::npos || !valid_short_form(sf)) continue;
    // Candidate long form: up to min(|sf| + 5, 2|sf|) words before '(' in
    // the same sentence.
    std::size_t begin = open_at;
    while (begin > 0) {
      char c = text[begin - 1];
      if (c == '.' || c == ';' || c == ':' || c == '\n' || c == '(' || c == ')' || c == '!' ||
          c == '?' || c == ',') {
        break;
      }
      --begin;
    }
    std::string window = text::squash_whitespace(text.substr(begin, open_at - begin));
    std::size_t limit = std::min(sf.size() + 5, sf.size() * 2);
    auto words = text::split(window, ' ');
    if (words.size() > limit) words.erase(words.begin(), words.end() - static_cast<long>(limit));
    std::string candidate = text::join(words, " ");
    if (candidate.empty()) continue;
    auto lf = best_long_form(sf, candidate);
    if (!lf || lf->size() <= sf.size()) continue;
    if (count_words(*lf) < 1 || text::to_lower(*lf).find(text::to_lower(sf)) != std::string::npos) continue;
    ++found[{sf, *lf}];
  }
}

std::vector<AbbreviationPair> collect(const std::map<std::pair<std::string, std::string>, std::size_t>& found) {
  std::vector<AbbreviationPair> out;
  for (const auto& [key, count] : found) out.push_back({key.first, key.second, count});
  return out;
}

}  // namespace

std::vector<AbbreviationPair> detect_abbreviations(std::string_view text) {
  std::map<std::pair<std::string, std::string>, std::size_t> found;
  scan(text, found);
  return collect(found);
}

std::vector<AbbreviationPair> detect_abbreviations(const std::vector<PaperDocument>& corpus) {
  std::map<std::pair<std::string, std::string>, std::size_t> found;
  for (const auto& doc : corpus) scan(doc.full_text(), found);
  return collect(found);
}

}  // namespace axtract
