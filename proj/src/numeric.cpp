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


#include "axtract/numeric.hpp"

#include <charconv>
#include <regex>

#include "axtract/text.hpp"

namespace axtract {

namespace {

std::string drop_markup(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c == '\\') {
      std::size_t j = i + 1;
      while (j < s.size() && std::isalpha(static_cast<unsigned char>(s[j]))) ++j;
      std::string_view name = s.substr(i + 1, j - i - 1);
      if (name == "pm") {
        out += "±";
      } else if (name == "%") {
        out += '%';
      } else if (name.empty() && j < s.size()) {
        if (s[j] == '%') out += '%';
        ++j;
      }
      i = j - 1;
      continue;
    }
    if (c == '{' || c == '}' || c == '$') continue;
    out += c;
  }
  return out;
}

void strip_suffix_after(std::string& s, std::string_view marker) {
  auto p = s.find(marker);
  if (p != std::string::npos) s.erase(p);
}

bool parse_decimal(const std::string& s, double& out) {
  static const std::regex kNumber(R"(^[+-]?(\d{1,3}(,\d{3})+|\d+)?(\.\d+)?$)");
  if (s.empty() || !std::regex_match(s, kNumber)) return false;
  if (s.find_first_of("0123456789") == std::string::npos) return false;
  std::string digits;
  for (char c : s) {
    if (c != ',' && c != '+') digits += c;
  }
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), out);
  return ec == std::errc() && ptr == digits.data() + digits.size();
}

}  // namespace

std::optional<NumericValue> parse_numeric(std::string_view raw) {
  std::string s = drop_markup(raw);
  strip_suffix_after(s, "±");
  strip_suffix_after(s, "+-");
  strip_suffix_after(s, "+/-");
  std::string cleaned;
  for (std::size_t i = 0; i < s.size(); ++i) {
    std::string_view rest(s.data() + i, s.size() - i);
    bool skipped = false;
    for (std::string_view mark : {"†", "‡", "§", "¶", "∗"}) {
      if (rest.starts_with(mark)) {
        i += mark.size() - 1;
        skipped = true;
        break;
      }
    }
    if (skipped) continue;
    char c = s[i];
    if (c == '%' || c == '*' || std::isspace(static_cast<unsigned char>(c))) continue;
    cleaned += c;
  }
  while (cleaned.size() >= 2 && ((cleaned.front() == '(' && cleaned.back() == ')') ||
                                 (cleaned.front() == '[' && cleaned.back() == ']'))) {
    cleaned = cleaned.substr(1, cleaned.size() - 2);
  }
  if (cleaned.empty()) return std::nullopt;
  auto parts = text::split(cleaned, '/');
  NumericValue result;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    double v = 0.0;
    if (!parse_decimal(parts[i], v)) return std::nullopt;
    if (i == 0) result.value = v;
  }
  result.multiple = parts.size() > 1;
  return result;
}

}  // namespace axtract
