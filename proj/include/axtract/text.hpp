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


#pragma once

#include <string>
#include <string_view>
#include <vector>

// Small text utilities shared by indexing, classification and linking.
namespace axtract::text {

std::string to_lower(std::string_view s);
std::string trim(std::string_view s);
// Collapses runs of whitespace into single spaces and trims.
std::string squash_whitespace(std::string_view s);

bool is_word_char(char c);

// Lowercased terms. Hyphens and dots are kept when both neighbours are word
// characters, so "SST-2", "en-vi", "R-1" and "94.5" stay single terms.
std::vector<std::string> tokenize(std::string_view s);

// Occurrence of `needle` on token boundaries: the neighbours are non-word
// characters other than a '-' or '.' joining the match to another word, so
// "1" does not match inside "r-1". Both arguments must already be lowercase.
bool contains_word(std::string_view haystack_lower, std::string_view needle_lower);

// Replaces every case-insensitive occurrence of `needle` with `replacement`.
std::string replace_all_icase(std::string_view s, std::string_view needle,
                              std::string_view replacement);

std::vector<std::string> split(std::string_view s, char sep);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

bool is_stop_word(std::string_view lower_word);
const std::vector<std::string>& stop_words();

// Plain sentence splitter: breaks after . ! ? followed by whitespace and an
// uppercase letter, digit or bracket, and at blank lines.
std::vector<std::string> split_sentences(std::string_view s);

}  // namespace axtract::text
