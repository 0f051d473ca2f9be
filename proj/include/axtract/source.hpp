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
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "axtract/diagnostics.hpp"

namespace axtract {

// One LaTeX source bundle. Paths are relative, '/'-separated.
struct PaperSource {
  std::string paper_id;
  std::map<std::string, std::string> files;
  std::string main_file;
};

struct CellPosition {
  std::size_t row = 0;
  std::size_t col = 0;

  friend auto operator<=>(const CellPosition&, const CellPosition&) = default;
};

struct Cell {
  std::string content;
  bool is_emphasised = false;
  std::vector<std::string> style;  // sorted tags, e.g. "align-left", "top-border"
  std::vector<std::string> reference_keys;
  bool is_header = false;
  CellPosition span_origin;

  friend bool operator==(const Cell&, const Cell&) = default;
};

struct RawTable {
  std::string table_id;
  std::string caption;
  std::vector<std::vector<Cell>> grid;
  std::optional<std::string> float_label;
  // 1-based number of the enclosing table float, 0 when the tabular is not
  // inside a table float.
  int ordinal = 0;

  std::size_t rows() const { return grid.size(); }
  std::size_t cols() const { return grid.empty() ? 0 : grid.front().size(); }
  const Cell& at(std::size_t r, std::size_t c) const { return grid.at(r).at(c); }

  friend bool operator==(const RawTable&, const RawTable&) = default;
};

struct Section {
  std::string heading;
  std::string body;

  friend bool operator==(const Section&, const Section&) = default;
};

struct Reference {
  std::string key;
  std::string text;

  friend bool operator==(const Reference&, const Reference&) = default;
};

struct PaperDocument {
  std::string paper_id;
  std::string title;
  std::string abstract;
  std::vector<Section> sections;
  std::vector<Reference> references;
  std::vector<RawTable> tables;

  // Title, abstract and all section bodies joined by newlines.
  std::string full_text() const;

  friend bool operator==(const PaperDocument&, const PaperDocument&) = default;
};

struct MacroDefinition {
  int num_args = 0;
  std::string body;
};

struct IngestOptions {
  // Extra user macros, merged with (and overridden by) definitions found in
  // the source. Keys are command names without the backslash.
  std::map<std::string, MacroDefinition> macros;
  int include_depth_limit = 10;
  int macro_depth_limit = 10;
};

// Loads a directory, a .tar.gz / .tgz / .tar archive or a single .tex file.
// Throws Error{kNoMainFile} or Error{kUnreadableArchive}.
PaperSource load_bundle(const std::filesystem::path& path);

// Picks the main file: the file containing \begin{document}; among several,
// the ones with \documentclass win, then the lexicographically smallest path.
// Throws Error{kNoMainFile}.
std::string choose_main_file(const std::map<std::string, std::string>& files);

struct IngestResult {
  PaperDocument document;
  Diagnostics diagnostics;
};

// Text and table extraction in one pass. The returned document carries the
// tables; extract_document/extract_tables are views of the same result.
IngestResult ingest(const PaperSource& src, const IngestOptions& options = {});
IngestResult extract_document(const PaperSource& src, const IngestOptions& options = {});
std::vector<RawTable> extract_tables(const PaperSource& src, const IngestOptions& options = {},
                                     Diagnostics* diagnostics = nullptr);

}  // namespace axtract
