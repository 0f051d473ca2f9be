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

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "axtract/diagnostics.hpp"
#include "axtract/source.hpp"

// Lexical helpers and a LaTeX-to-plain-text converter. These operate on raw
// source strings; `pos` arguments are byte offsets and are advanced past the
// construct on success.
namespace axtract::latex {

inline constexpr std::string_view kMathPlaceholder = "[MATH]";

std::string strip_comments(std::string_view s);

void skip_spaces(std::string_view s, std::size_t& pos);
// Reads a command name starting right after the backslash: a run of letters
// or a single non-letter character. An optional trailing '*' is not consumed.
std::string_view read_command_name(std::string_view s, std::size_t& pos);
// Index of the '}' matching the '{' at `open`, or npos.
std::size_t matching_brace(std::string_view s, std::size_t open);
// Skips whitespace, then reads a balanced {...} group and returns its inside.
std::optional<std::string_view> read_group(std::string_view s, std::size_t& pos);
// Skips whitespace, then reads a balanced [...] and returns its inside.
std::optional<std::string_view> read_optional(std::string_view s, std::size_t& pos);
// Reads an argument: a group, or a single token (\command or character).
std::optional<std::string> read_argument(std::string_view s, std::size_t& pos);

struct EnvSpan {
  std::string name;
  std::size_t begin = 0;       // offset of "\begin"
  std::size_t body_begin = 0;  // just after "\begin{name}"
  std::size_t body_end = 0;    // offset of the matching "\end"
  std::size_t end = 0;         // just after "\end{name}"
};

// Finds the first \begin{X} at or after `pos` with accept(X), and its matching
// \end{X} (same-name nesting respected). An environment that is never closed
// extends to the end of the input.
std::optional<EnvSpan> find_environment(std::string_view s, std::size_t pos,
                                        const std::function<bool(std::string_view)>& accept);

using MacroTable = std::map<std::string, MacroDefinition>;

// Removes \newcommand / \renewcommand / \providecommand / \def /
// \DeclareMathOperator definitions from `s`, recording zero- and one-argument
// macros in `table`.
std::string extract_macro_definitions(std::string_view s, MacroTable& table,
                                      Diagnostics* diagnostics = nullptr);
std::string expand_macros(std::string_view s, const MacroTable& table, int depth_limit,
                          Diagnostics* diagnostics = nullptr);

enum class Mode {
  kDocument,  // math becomes a placeholder, citations render as [key]
  kCell,      // math is rendered inline, citations are collected and removed
};

struct RefTarget {
  std::string kind;    // "table", "figure", "section"
  std::string number;  // "2", "3.1", "A"
};
using RefMap = std::map<std::string, RefTarget>;

struct PlainText {
  std::string text;
  bool emphasised = false;
  std::vector<std::string> citations;
};

PlainText to_plain(std::string_view s, Mode mode, const RefMap* refs = nullptr,
                   Diagnostics* diagnostics = nullptr);

bool is_tabular_environment(std::string_view name);
bool is_math_environment(std::string_view name);

}  // namespace axtract::latex
