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
#include <filesystem>
#include <set>

#include "axtract/latex.hpp"
#include "axtract/source.hpp"
#include "axtract/text.hpp"

namespace axtract {

namespace fs = std::filesystem;
using latex::EnvSpan;
using latex::RefMap;

namespace {

// ---------------------------------------------------------------------------
// Include inlining

class Inliner {
 public:
  Inliner(const PaperSource& src, int depth_limit, Diagnostics& diags)
      : src_(src), limit_(depth_limit), diags_(diags) {}

  std::string run() { return inline_file(src_.main_file, 0); }

 private:
  std::optional<std::string> resolve(const std::string& from, std::string name) const {
    name = text::trim(name);
    if (name.empty()) return std::nullopt;
    std::vector<std::string> candidates;
    fs::path base = fs::path(from).parent_path();
    for (const fs::path& dir : {base, fs::path()}) {
      fs::path p = (dir / name).lexically_normal();
      candidates.push_back(p.generic_string());
      candidates.push_back(p.generic_string() + ".tex");
    }
    for (const auto& c : candidates) {
      if (src_.files.contains(c)) return c;
    }
    return std::nullopt;
  }

  std::string inline_file(const std::string& path, int depth) {
    stack_.push_back(path);
    std::string content = latex::strip_comments(src_.files.at(path));
    std::string out;
    std::size_t pos = 0;
    while (pos < content.size()) {
      if (content[pos] != '\\') {
        out += content[pos++];
        continue;
      }
      std::size_t p = pos + 1;
      std::string_view cmd = latex::read_command_name(content, p);
      if (cmd != "input" && cmd != "include" && cmd != "subfile") {
        out.append(content, pos, p - pos);
        pos = p;
        continue;
      }
      std::string target;
      std::size_t q = p;
      if (auto g = latex::read_group(content, q)) {
        target = std::string(*g);
      } else {
        latex::skip_spaces(content, q);
        std::size_t e = q;
        while (e < content.size() && !std::isspace(static_cast<unsigned char>(content[e])) &&
               content[e] != '\\' && content[e] != '}') {
          ++e;
        }
        target = content.substr(q, e - q);
        q = e;
      }
      pos = q;
      auto resolved = resolve(path, target);
      if (!resolved) {
        diags_.add("IncludeNotFound", "cannot resolve '" + target + "' from " + path);
        continue;
      }
      if (std::find(stack_.begin(), stack_.end(), *resolved) != stack_.end()) {
        diags_.add("IncludeCycle", *resolved + " includes itself via " + path);
        continue;
      }
      if (depth + 1 > limit_) {
        diags_.add("IncludeDepthExceeded", "include depth limit reached at " + *resolved);
        continue;
      }
      out += '\n';
      out += inline_file(*resolved, depth + 1);
      out += '\n';
    }
    stack_.pop_back();
    return out;
  }

  const PaperSource& src_;
  int limit_;
  Diagnostics& diags_;
  std::vector<std::string> stack_;
};

// ---------------------------------------------------------------------------
// Reference numbering

bool is_table_float(std::string_view name) {
  return name == "table" || name == "table*" || name == "wraptable" ||
         name == "sidewaystable" || name == "sidewaystable*";
}

bool is_figure_float(std::string_view name) {
  return name == "figure" || name == "figure*" || name == "wrapfigure";
}

std::string letter_number(int n) {
  std::string s;
  while (n > 0) {
    s.insert(s.begin(), static_cast<char>('A' + (n - 1) % 26));
    n = (n - 1) / 26;
  }
  return s;
}

// Walks the body once, numbering sections, table and figure floats, and
// records the target of every \label.
RefMap number_labels(std::string_view body) {
  RefMap refs;
  int counters[3] = {0, 0, 0};
  bool appendix = false;
  int tables = 0;
  int figures = 0;
  struct Open {
    std::string kind;
    std::string number;
    std::string env;
  };
  std::vector<Open> open;
  auto section_number = [&] {
    std::string s = appendix ? letter_number(counters[0]) : std::to_string(counters[0]);
    for (int i = 1; i < 3 && counters[i] > 0; ++i) s += "." + std::to_string(counters[i]);
    return s;
  };
  std::size_t pos = 0;
  while ((pos = body.find('\\', pos)) != std::string_view::npos) {
    std::size_t p = pos + 1;
    std::string cmd(latex::read_command_name(body, p));
    bool starred = p < body.size() && body[p] == '*';
    if (cmd == "appendix") {
      appendix = true;
      counters[0] = counters[1] = counters[2] = 0;
    } else if (cmd == "section" || cmd == "subsection" || cmd == "subsubsection") {
      if (!starred) {
        int level = cmd == "section" ? 0 : cmd == "subsection" ? 1 : 2;
        ++counters[level];
        for (int i = level + 1; i < 3; ++i) counters[i] = 0;
      }
    } else if (cmd == "begin" || cmd == "end") {
      std::size_t q = p;
      if (auto name = latex::read_group(body, q)) {
        std::string env(*name);
        bool longtable = env == "longtable" || env == "longtable*";
        if (cmd == "begin" && (is_table_float(env) || longtable)) {
          open.push_back({"table", std::to_string(++tables), env});
        } else if (cmd == "begin" && is_figure_float(env)) {
          open.push_back({"figure", std::to_string(++figures), env});
        } else if (cmd == "end" && !open.empty() && open.back().env == env) {
          open.pop_back();
        }
        p = q;
      }
    } else if (cmd == "label") {
      std::size_t q = p;
      if (auto key = latex::read_group(body, q)) {
        std::string k = text::trim(*key);
        if (!refs.contains(k)) {
          if (!open.empty()) {
            refs[k] = {open.back().kind, open.back().number};
          } else {
            refs[k] = {"section", section_number()};
          }
        }
        p = q;
      }
    }
    pos = p;
  }
  return refs;
}

// ---------------------------------------------------------------------------
// Tables

struct ColumnSpec {
  char align = 'l';
  bool left_border = false;
  bool right_border = false;
};

std::vector<ColumnSpec> parse_colspec(std::string_view spec, int guard = 0) {
  std::vector<ColumnSpec> cols;
  bool pending_left = false;
  std::size_t pos = 0;
  auto skip_group = [&] {
    std::size_t p = pos;
    if (latex::read_group(spec, p)) pos = p;
  };
  while (pos < spec.size()) {
    char c = spec[pos++];
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    if (c == '|') {
      if (cols.empty()) {
        pending_left = true;
      } else {
        cols.back().right_border = true;
      }
      continue;
    }
    if (c == '@' || c == '!' || c == '>' || c == '<') {
      skip_group();
      continue;
    }
    if (c == '*') {
      std::size_t p = pos;
      auto n = latex::read_group(spec, p);
      auto sub = latex::read_group(spec, p);
      if (n && sub && guard < 4) {
        int count = std::max(0, std::atoi(std::string(*n).c_str()));
        auto inner = parse_colspec(*sub, guard + 1);
        for (int i = 0; i < count; ++i) cols.insert(cols.end(), inner.begin(), inner.end());
        pos = p;
      }
      continue;
    }
    if (c == '\\' ) {
      latex::read_command_name(spec, pos);
      continue;
    }
    if (c == '{' ) {
      std::size_t close = latex::matching_brace(spec, pos - 1);
      pos = close == std::string_view::npos ? spec.size() : close + 1;
      continue;
    }
    if (!std::isalpha(static_cast<unsigned char>(c))) continue;
    ColumnSpec col;
    char lower = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    col.align = lower == 'c' || lower == 's' ? 'c' : lower == 'r' || lower == 'd' ? 'r' : 'l';
    if (c == 'p' || c == 'm' || c == 'b' || c == 'P' || c == 'M' || c == 'B') skip_group();
    if (c == 'D') {
      skip_group();
      skip_group();
      skip_group();
    }
    col.left_border = pending_left;
    pending_left = false;
    cols.push_back(col);
  }
  return cols;
}

std::string align_tag(char a) {
  return a == 'c' ? "align-center" : a == 'r' ? "align-right" : "align-left";
}

struct RuleInfo {
  bool full = false;
  std::vector<std::pair<int, int>> partial;  // 1-based inclusive column ranges
  bool any() const { return full || !partial.empty(); }
  bool covers(std::size_t col) const {
    if (full) return true;
    for (auto [a, b] : partial) {
      if (static_cast<int>(col) + 1 >= a && static_cast<int>(col) + 1 <= b) return true;
    }
    return false;
  }
};

struct RowSource {
  RuleInfo rules_before;
  bool colored = false;
  std::string content;
};

void parse_range(std::string_view r, RuleInfo& info) {
  auto dash = r.find('-');
  if (dash == std::string_view::npos) return;
  int a = std::atoi(std::string(r.substr(0, dash)).c_str());
  int b = std::atoi(std::string(r.substr(dash + 1)).c_str());
  if (a > 0 && b >= a) info.partial.emplace_back(a, b);
}

// Consumes rule and row-decoration commands at the start of a row segment.
// Returns the remaining content.
std::string strip_row_prefix(std::string_view seg, RuleInfo& rules, bool& colored,
                             std::string& caption, std::string& label) {
  std::size_t pos = 0;
  while (true) {
    latex::skip_spaces(seg, pos);
    if (pos >= seg.size() || seg[pos] != '\\') break;
    std::size_t p = pos + 1;
    std::string cmd(latex::read_command_name(seg, p));
    if (cmd == "hline" || cmd == "toprule" || cmd == "midrule" || cmd == "bottomrule" ||
        cmd == "Xhline" || cmd == "thickhline") {
      if (p < seg.size() && seg[p] == '[') latex::read_optional(seg, p);
      if (cmd == "Xhline") latex::read_group(seg, p);
      rules.full = true;
    } else if (cmd == "specialrule") {
      for (int i = 0; i < 3; ++i) latex::read_group(seg, p);
      rules.full = true;
    } else if (cmd == "cline" || cmd == "cmidrule" || cmd == "Cline") {
      if (p < seg.size() && seg[p] == '[') latex::read_optional(seg, p);
      latex::skip_spaces(seg, p);
      if (p < seg.size() && seg[p] == '(') {
        auto close = seg.find(')', p);
        if (close != std::string_view::npos) p = close + 1;
      }
      if (auto g = latex::read_group(seg, p)) parse_range(*g, rules);
    } else if (cmd == "hhline" || cmd == "noalign" || cmd == "rowcolors") {
      latex::read_group(seg, p);
      if (cmd == "hhline") rules.full = true;
    } else if (cmd == "addlinespace" || cmd == "endhead" || cmd == "endfirsthead" ||
               cmd == "endfoot" || cmd == "endlastfoot" || cmd == "centering" ||
               cmd == "small" || cmd == "footnotesize" || cmd == "scriptsize" ||
               cmd == "tiny" || cmd == "hdashline") {
      if (p < seg.size() && seg[p] == '[') latex::read_optional(seg, p);
    } else if (cmd == "rowcolor") {
      if (p < seg.size() && seg[p] == '[') latex::read_optional(seg, p);
      latex::read_group(seg, p);
      colored = true;
    } else if (cmd == "caption") {
      if (p < seg.size() && seg[p] == '[') latex::read_optional(seg, p);
      if (auto g = latex::read_group(seg, p)) caption = std::string(*g);
    } else if (cmd == "label") {
      if (auto g = latex::read_group(seg, p)) label = text::trim(*g);
    } else {
      break;
    }
    pos = p;
  }
  return std::string(seg.substr(pos));
}

// Splits `s` at top-level occurrences of a separator. `sep_at` returns the
// separator length at position i (0 when none). Escaped characters and
// braced groups are skipped.
template <typename SepAt>
std::vector<std::string> split_top_level(std::string_view s, SepAt sep_at) {
  std::vector<std::string> parts;
  std::string cur;
  int depth = 0;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (depth == 0) {
      if (std::size_t n = sep_at(s, i); n > 0) {
        parts.push_back(std::move(cur));
        cur.clear();
        i += n;
        continue;
      }
    }
    if (c == '\\' && i + 1 < s.size()) {
      cur.append(s.substr(i, 2));
      i += 2;
      continue;
    }
    if (c == '{') ++depth;
    if (c == '}' && depth > 0) --depth;
    cur += c;
    ++i;
  }
  parts.push_back(std::move(cur));
  return parts;
}

std::size_t row_separator_at(std::string_view s, std::size_t i) {
  if (s[i] != '\\' || i + 1 >= s.size()) return 0;
  if (s[i + 1] == '\\') {
    std::size_t p = i + 2;
    if (p < s.size() && s[p] == '*') ++p;
    std::size_t q = p;
    latex::skip_spaces(s, q);
    if (q < s.size() && s[q] == '[') {
      std::size_t r = q;
      if (latex::read_optional(s, r)) p = r;
    }
    return p - i;
  }
  static constexpr std::string_view kNewline = "\\tabularnewline";
  if (s.substr(i, kNewline.size()) == kNewline &&
      (i + kNewline.size() == s.size() ||
       !std::isalpha(static_cast<unsigned char>(s[i + kNewline.size()])))) {
    return kNewline.size();
  }
  return 0;
}

std::size_t cell_separator_at(std::string_view s, std::size_t i) { return s[i] == '&' ? 1 : 0; }

struct PlacedCell {
  Cell cell;
  int colspan = 1;
  int rowspan = 1;
  std::optional<char> align;
};

PlacedCell parse_cell(std::string_view src, const RefMap& refs, Diagnostics& diags) {
  PlacedCell placed;
  std::string body = text::trim(src);
  for (int round = 0; round < 2; ++round) {
    std::size_t pos = 0;
    if (body.starts_with("\\multicolumn")) {
      pos = std::string_view("\\multicolumn").size();
      auto n = latex::read_group(body, pos);
      auto spec = latex::read_group(body, pos);
      auto content = latex::read_group(body, pos);
      if (n && spec && content) {
        placed.colspan = std::max(1, std::atoi(std::string(*n).c_str()));
        auto cols = parse_colspec(*spec);
        if (!cols.empty()) placed.align = cols.front().align;
        std::string rest = text::trim(std::string_view(body).substr(pos));
        body = text::trim(*content) + (rest.empty() ? "" : " " + rest);
        continue;
      }
    } else if (body.starts_with("\\multirow")) {
      pos = std::string_view("\\multirow").size();
      latex::read_optional(body, pos);
      auto n = latex::read_group(body, pos);
      latex::read_optional(body, pos);
      latex::skip_spaces(body, pos);
      if (pos < body.size() && (body[pos] == '*' || body[pos] == '=')) {
        ++pos;
      } else {
        latex::read_group(body, pos);
      }
      latex::read_optional(body, pos);
      auto content = latex::read_group(body, pos);
      if (n && content) {
        placed.rowspan = std::atoi(std::string(*n).c_str());
        if (placed.rowspan == 0) placed.rowspan = 1;
        std::string rest = text::trim(std::string_view(body).substr(pos));
        body = text::trim(*content) + (rest.empty() ? "" : " " + rest);
        continue;
      }
    }
    break;
  }
  auto plain = latex::to_plain(body, latex::Mode::kCell, &refs, &diags);
  placed.cell.content = std::move(plain.text);
  placed.cell.is_emphasised = plain.emphasised;
  placed.cell.reference_keys = std::move(plain.citations);
  return placed;
}

struct TableContext {
  std::string caption;
  std::optional<std::string> label;
  int ordinal = 0;
};

std::optional<RawTable> parse_tabular(std::string_view source, const EnvSpan& env,
                                      const TableContext& ctx, const std::string& table_id,
                                      const RefMap& refs, Diagnostics& diags) {
  std::size_t pos = env.body_begin;
  std::string_view s = source;
  // Arguments: tabular*/tabularx/tabulary take a width first.
  if (env.name == "tabular*" || env.name == "tabularx" || env.name == "tabulary" ||
      env.name == "xtabular*") {
    latex::read_group(s, pos);
  }
  latex::read_optional(s, pos);
  std::vector<ColumnSpec> colspec;
  if (auto spec = latex::read_group(s, pos)) colspec = parse_colspec(*spec);
  std::string body(s.substr(pos, env.body_end - std::min(pos, env.body_end)));

  // Inner tables are skipped.
  while (auto inner = latex::find_environment(body, 0, latex::is_tabular_environment)) {
    diags.add("NestedTable", "nested " + inner->name + " inside " + table_id + " skipped");
    body.replace(inner->begin, inner->end - inner->begin, " ");
  }

  std::string caption = ctx.caption;
  std::optional<std::string> label = ctx.label;
  std::vector<RowSource> rows;
  RuleInfo pending;
  bool pending_color = false;
  RuleInfo trailing;
  auto segments = split_top_level(body, row_separator_at);
  for (std::size_t i = 0; i < segments.size(); ++i) {
    RuleInfo rules;
    bool colored = false;
    std::string cap;
    std::string lab;
    std::string content = strip_row_prefix(segments[i], rules, colored, cap, lab);
    if (!cap.empty()) caption = latex::to_plain(cap, latex::Mode::kDocument, &refs).text;
    if (!lab.empty() && !label) label = lab;
    if (rules.full) pending.full = true;
    pending.partial.insert(pending.partial.end(), rules.partial.begin(), rules.partial.end());
    pending_color = pending_color || colored;
    if (text::trim(content).empty()) continue;
    rows.push_back({pending, pending_color, std::move(content)});
    pending = RuleInfo{};
    pending_color = false;
  }
  trailing = pending;
  if (rows.empty()) {
    diags.add("EmptyTable", table_id + " has no rows");
    return std::nullopt;
  }

  std::vector<std::vector<PlacedCell>> placed_rows;
  std::size_t width = colspec.size();
  std::size_t max_width = 0;
  for (const auto& row : rows) {
    std::vector<PlacedCell> cells;
    std::size_t w = 0;
    for (auto& cell_src : split_top_level(row.content, cell_separator_at)) {
      cells.push_back(parse_cell(cell_src, refs, diags));
      if (row.colored) cells.back().cell.is_emphasised = true;
      w += static_cast<std::size_t>(cells.back().colspan);
    }
    max_width = std::max(max_width, w);
    placed_rows.push_back(std::move(cells));
  }
  if (width == 0) width = max_width;
  if (max_width > width) {
    diags.add("MalformedTable", table_id + ": a row spans " + std::to_string(max_width) +
                                    " columns but the table declares " + std::to_string(width));
    return std::nullopt;
  }

  RawTable table;
  table.table_id = table_id;
  table.caption = caption;
  table.float_label = label;
  table.ordinal = ctx.ordinal;
  const std::size_t nrows = placed_rows.size();
  table.grid.assign(nrows, std::vector<Cell>(width));
  std::vector<std::vector<bool>> from_source(nrows, std::vector<bool>(width, false));
  struct Span {
    std::size_t row, col, rows, cols;
  };
  std::vector<Span> row_spans;
  for (std::size_t r = 0; r < nrows; ++r) {
    std::size_t c = 0;
    for (auto& pc : placed_rows[r]) {
      for (int k = 0; k < pc.colspan && c < width; ++k, ++c) {
        Cell cell = pc.cell;
        cell.span_origin = {r, c - static_cast<std::size_t>(k)};
        char align = pc.align.value_or(c < colspec.size() ? colspec[c].align : 'l');
        cell.style = {align_tag(align)};
        table.grid[r][c] = std::move(cell);
        from_source[r][c] = true;
      }
      if (pc.rowspan != 1) {
        std::size_t start_col = c - static_cast<std::size_t>(pc.colspan);
        std::size_t span = static_cast<std::size_t>(std::abs(pc.rowspan));
        std::size_t first = pc.rowspan > 0 ? r : (r + 1 >= span ? r + 1 - span : 0);
        row_spans.push_back({first, start_col, span, static_cast<std::size_t>(pc.colspan)});
      }
    }
    for (; c < width; ++c) {
      table.grid[r][c].span_origin = {r, c};
      table.grid[r][c].style = {align_tag(c < colspec.size() ? colspec[c].align : 'l')};
    }
  }
  // Flatten multirow spans by duplicating the defining cell.
  for (const auto& span : row_spans) {
    // Locate the defining cell: the non-empty cell within the span.
    std::optional<CellPosition> origin;
    for (std::size_t rr = span.row; rr < span.row + span.rows && rr < nrows && !origin; ++rr) {
      const Cell& cand = table.grid[rr][span.col];
      if (!cand.content.empty()) origin = CellPosition{rr, cand.span_origin.col};
    }
    if (!origin) continue;
    const Cell source = table.grid[origin->row][origin->col];
    for (std::size_t rr = span.row; rr < span.row + span.rows && rr < nrows; ++rr) {
      for (std::size_t cc = span.col; cc < span.col + span.cols && cc < width; ++cc) {
        Cell& target = table.grid[rr][cc];
        if (rr == origin->row) continue;
        if (!target.content.empty()) continue;
        target.content = source.content;
        target.is_emphasised = source.is_emphasised;
        target.reference_keys = source.reference_keys;
        target.span_origin = *origin;
      }
    }
  }

  // Header rows: everything above the first full rule that has rows on both
  // sides.
  std::size_t header_rows = 0;
  for (std::size_t r = 1; r < nrows; ++r) {
    if (rows[r].rules_before.full) {
      header_rows = r;
      break;
    }
  }
  for (std::size_t r = 0; r < nrows; ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      Cell& cell = table.grid[r][c];
      cell.is_header = r < header_rows || c == 0;
      const RuleInfo& above = rows[r].rules_before;
      const RuleInfo& below = r + 1 < nrows ? rows[r + 1].rules_before : trailing;
      if (above.covers(c)) cell.style.push_back("top-border");
      if (below.covers(c)) cell.style.push_back("bottom-border");
      if (c < colspec.size() && colspec[c].left_border) cell.style.push_back("left-border");
      if (c < colspec.size() && colspec[c].right_border) cell.style.push_back("right-border");
      std::sort(cell.style.begin(), cell.style.end());
    }
  }
  return table;
}

std::string first_command_argument(std::string_view s, std::string_view command,
                                   std::size_t* where = nullptr) {
  std::string needle = "\\" + std::string(command);
  std::size_t pos = 0;
  while ((pos = s.find(needle, pos)) != std::string_view::npos) {
    std::size_t p = pos + needle.size();
    if (p < s.size() && std::isalpha(static_cast<unsigned char>(s[p]))) {
      pos = p;
      continue;
    }
    if (p < s.size() && s[p] == '*') ++p;
    latex::read_optional(s, p);
    if (auto g = latex::read_group(s, p)) {
      if (where) *where = pos;
      return std::string(*g);
    }
    pos = p;
  }
  return {};
}

std::vector<RawTable> collect_tables(std::string_view body, const RefMap& refs,
                                     Diagnostics& diags) {
  std::vector<RawTable> tables;
  int ordinal = 0;
  int tabular_counter = 0;
  auto accept = [](std::string_view n) {
    return is_table_float(n) || latex::is_tabular_environment(n);
  };
  auto emit = [&](std::string_view src, const EnvSpan& env, const TableContext& ctx) {
    ++tabular_counter;
    std::string id = "table_" + std::string(tabular_counter < 10 ? "0" : "") +
                     std::to_string(tabular_counter);
    if (auto t = parse_tabular(src, env, ctx, id, refs, diags)) tables.push_back(std::move(*t));
  };
  std::size_t pos = 0;
  while (auto env = latex::find_environment(body, pos, accept)) {
    if (is_table_float(env->name)) {
      ++ordinal;
      std::string_view fl = body.substr(env->body_begin, env->body_end - env->body_begin);
      TableContext ctx;
      ctx.ordinal = ordinal;
      // Caption and label outside the tabulars of this float.
      std::string outside(fl);
      std::vector<EnvSpan> inner;
      std::size_t q = 0;
      while (auto t = latex::find_environment(fl, q, latex::is_tabular_environment)) {
        inner.push_back(*t);
        q = t->end;
      }
      for (auto it = inner.rbegin(); it != inner.rend(); ++it) {
        outside.replace(it->begin, it->end - it->begin, " ");
      }
      std::string cap = first_command_argument(outside, "caption");
      if (!cap.empty()) ctx.caption = latex::to_plain(cap, latex::Mode::kDocument, &refs).text;
      std::string lab = text::trim(first_command_argument(outside, "label"));
      if (!lab.empty()) ctx.label = lab;
      for (const auto& t : inner) emit(fl, t, ctx);
    } else {
      TableContext ctx;
      if (env->name.starts_with("longtable")) ctx.ordinal = ++ordinal;
      emit(body, *env, ctx);
    }
    pos = env->end;
  }
  return tables;
}

// ---------------------------------------------------------------------------
// Document structure

std::vector<Reference> parse_bibliography(std::string_view bib, const RefMap& refs) {
  std::vector<Reference> out;
  static constexpr std::string_view kItem = "\\bibitem";
  std::size_t pos = bib.find(kItem);
  while (pos != std::string_view::npos) {
    std::size_t p = pos + kItem.size();
    if (p < bib.size() && std::isalpha(static_cast<unsigned char>(bib[p]))) {
      pos = bib.find(kItem, p);
      continue;
    }
    latex::read_optional(bib, p);
    auto key = latex::read_group(bib, p);
    std::size_t next = bib.find(kItem, p);
    std::string_view body = bib.substr(p, (next == std::string_view::npos ? bib.size() : next) - p);
    if (key) {
      out.push_back({text::trim(*key),
                     text::squash_whitespace(
                         latex::to_plain(body, latex::Mode::kDocument, &refs).text)});
    }
    pos = next;
  }
  return out;
}

std::string erase_span(std::string s, const EnvSpan& span) {
  s.erase(span.begin, span.end - span.begin);
  return s;
}

struct Prepared {
  std::string full;  // inlined, macro-expanded source
  std::string body;  // document environment content
  RefMap refs;
};

Prepared prepare(const PaperSource& src, const IngestOptions& options, Diagnostics& diags) {
  Prepared prep;
  Inliner inliner(src, options.include_depth_limit, diags);
  std::string inlined = inliner.run();
  latex::MacroTable macros(options.macros.begin(), options.macros.end());
  std::string stripped = latex::extract_macro_definitions(inlined, macros, &diags);
  prep.full = latex::expand_macros(stripped, macros, options.macro_depth_limit, &diags);
  auto doc = latex::find_environment(prep.full, 0,
                                     [](std::string_view n) { return n == "document"; });
  prep.body = doc ? prep.full.substr(doc->body_begin, doc->body_end - doc->body_begin)
                  : prep.full;
  prep.refs = number_labels(prep.body);
  return prep;
}

}  // namespace

std::string PaperDocument::full_text() const {
  std::string out = title;
  if (!abstract.empty()) out += "\n\n" + abstract;
  for (const auto& s : sections) {
    if (!s.heading.empty()) out += "\n\n" + s.heading;
    out += "\n\n" + s.body;
  }
  return out;
}

IngestResult ingest(const PaperSource& src, const IngestOptions& options) {
  IngestResult result;
  result.diagnostics.set_paper_id(src.paper_id);
  Diagnostics& diags = result.diagnostics;
  Prepared prep = prepare(src, options, diags);
  PaperDocument& doc = result.document;
  doc.paper_id = src.paper_id;

  std::string title = first_command_argument(prep.full, "title");
  doc.title = text::squash_whitespace(latex::to_plain(title, latex::Mode::kDocument).text);

  std::string body = prep.body;
  if (auto abs = latex::find_environment(body, 0,
                                         [](std::string_view n) { return n == "abstract"; })) {
    doc.abstract = text::trim(latex::to_plain(body.substr(abs->body_begin,
                                                          abs->body_end - abs->body_begin),
                                              latex::Mode::kDocument, &prep.refs)
                                  .text);
    body = erase_span(body, *abs);
  } else if (auto pre = latex::find_environment(
                 prep.full, 0, [](std::string_view n) { return n == "abstract"; })) {
    doc.abstract = text::trim(latex::to_plain(prep.full.substr(pre->body_begin,
                                                               pre->body_end - pre->body_begin),
                                              latex::Mode::kDocument, &prep.refs)
                                  .text);
  } else {
    std::string a = first_command_argument(body, "abstract");
    if (!a.empty()) doc.abstract = text::trim(latex::to_plain(a, latex::Mode::kDocument).text);
  }

  auto is_bib = [](std::string_view n) { return n == "thebibliography"; };
  if (auto bib = latex::find_environment(body, 0, is_bib)) {
    doc.references = parse_bibliography(
        std::string_view(body).substr(bib->body_begin, bib->body_end - bib->body_begin),
        prep.refs);
    body = erase_span(body, *bib);
  } else if (body.find("\\bibliography{") != std::string::npos) {
    std::string stem = fs::path(src.main_file).replace_extension(".bbl").generic_string();
    const std::string* bbl = nullptr;
    if (auto it = src.files.find(stem); it != src.files.end()) {
      bbl = &it->second;
    } else {
      for (const auto& [path, content] : src.files) {
        if (path.ends_with(".bbl")) {
          bbl = &content;
          break;
        }
      }
    }
    if (bbl) {
      std::string stripped = latex::strip_comments(*bbl);
      if (auto env = latex::find_environment(stripped, 0, is_bib)) {
        doc.references = parse_bibliography(
            std::string_view(stripped).substr(env->body_begin, env->body_end - env->body_begin),
            prep.refs);
      }
    } else {
      diags.add("MissingBibliography", "\\bibliography used but no .bbl file in bundle");
    }
  }

  doc.tables = collect_tables(prep.body, prep.refs, diags);

  // Sections.
  struct Mark {
    std::size_t begin, content;
    std::string heading;
  };
  std::vector<Mark> marks;
  std::size_t pos = 0;
  while ((pos = body.find('\\', pos)) != std::string::npos) {
    std::size_t p = pos + 1;
    std::string cmd(latex::read_command_name(body, p));
    if (cmd == "chapter" || cmd == "section" || cmd == "subsection" || cmd == "subsubsection") {
      std::size_t q = p;
      if (q < body.size() && body[q] == '*') ++q;
      latex::read_optional(body, q);
      if (auto g = latex::read_group(body, q)) {
        marks.push_back({pos, q,
                         text::squash_whitespace(
                             latex::to_plain(*g, latex::Mode::kDocument, &prep.refs).text)});
        pos = q;
        continue;
      }
    }
    pos = p;
  }
  auto add_section = [&](std::string heading, std::string_view raw) {
    std::string plain = text::trim(latex::to_plain(raw, latex::Mode::kDocument, &prep.refs).text);
    if (heading.empty() && plain.empty()) return;
    doc.sections.push_back({std::move(heading), std::move(plain)});
  };
  add_section("", std::string_view(body).substr(0, marks.empty() ? body.size() : marks[0].begin));
  for (std::size_t i = 0; i < marks.size(); ++i) {
    std::size_t end = i + 1 < marks.size() ? marks[i + 1].begin : body.size();
    add_section(marks[i].heading,
                std::string_view(body).substr(marks[i].content, end - marks[i].content));
  }
  return result;
}

IngestResult extract_document(const PaperSource& src, const IngestOptions& options) {
  return ingest(src, options);
}

std::vector<RawTable> extract_tables(const PaperSource& src, const IngestOptions& options,
                                     Diagnostics* diagnostics) {
  IngestResult r = ingest(src, options);
  if (diagnostics) diagnostics->append(r.diagnostics);
  return std::move(r.document.tables);
}

}  // namespace axtract
