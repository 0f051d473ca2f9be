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


#include "axtract/latex.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "axtract/text.hpp"

namespace axtract::latex {

namespace {

bool is_letter(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

using NameSet = std::set<std::string, std::less<>>;

const NameSet& tabular_envs() {
  static const NameSet s = {"tabular",  "tabular*",     "tabularx", "tabulary",
                            "longtable", "longtable*",  "supertabular", "xtabular",
                            "NiceTabular"};
  return s;
}

const NameSet& math_envs() {
  static const NameSet s = {"equation", "equation*", "align",    "align*",   "gather",
                            "gather*",  "multline",  "multline*", "eqnarray", "eqnarray*",
                            "displaymath", "math",   "flalign",  "flalign*", "alignat",
                            "alignat*"};
  return s;
}

// Environments whose whole content is dropped from running text.
const NameSet& dropped_envs() {
  static const NameSet s = {"figure",       "figure*",    "table",        "table*",
                            "wrapfigure",   "wraptable",  "sidewaystable", "sidewaystable*",
                            "tikzpicture",  "comment",    "verbatim",     "lstlisting",
                            "thebibliography", "algorithm", "algorithm*", "algorithmic",
                            "minted",       "pgfpicture", "picture"};
  return s;
}

// Environments whose \begin takes mandatory arguments that are not text.
int env_arg_count(std::string_view name) {
  if (name == "minipage" || name == "varwidth" || name == "multicols" ||
      name == "subfigure" || name == "subtable" || name == "adjustbox" ||
      name == "wrapfigure" || name == "wraptable" || name == "spacing") {
    return 1;
  }
  return 0;
}

const NameSet& emphasis_commands() {
  static const NameSet s = {"textbf", "textit", "emph",  "underline", "textsl",
                            "mathbf", "boldsymbol", "bm", "uline",   "hl",
                            "textbfit", "mathbfit"};
  return s;
}

const NameSet& emphasis_declarations() {
  static const NameSet s = {"bf", "bfseries", "it", "itshape", "em", "sl", "slshape",
                            "boldmath", "bfcode"};
  return s;
}

const NameSet& cite_commands() {
  static const NameSet s = {"cite",      "citep",     "citet",       "citealp",  "citealt",
                            "citeauthor", "citeyear", "citeyearpar", "parencite", "textcite",
                            "autocite",  "footcite",  "nocite",      "Cite",     "Citep",
                            "Citet",     "citenum",   "smartcite",   "supercite"};
  return s;
}

const NameSet& ref_commands() {
  static const NameSet s = {"ref", "eqref", "autoref", "cref", "Cref", "pageref",
                            "vref", "Vref", "cpageref", "nameref", "subref"};
  return s;
}

// Commands whose mandatory arguments are discarded: name -> count.
const std::map<std::string, int, std::less<>>& dropped_arg_commands() {
  static const std::map<std::string, int, std::less<>> m = {
      {"label", 1},        {"vspace", 1},        {"hspace", 1},       {"includegraphics", 1},
      {"setlength", 2},    {"addtolength", 2},   {"setcounter", 2},   {"addtocounter", 2},
      {"cline", 1},        {"hhline", 1},        {"bibliographystyle", 1},
      {"bibliography", 1}, {"usepackage", 1},    {"RequirePackage", 1},
      {"documentclass", 1}, {"hypersetup", 1},   {"definecolor", 3},  {"colorlet", 2},
      {"color", 1},        {"cellcolor", 1},     {"rowcolor", 1},     {"columncolor", 1},
      {"arrayrulecolor", 1}, {"pagestyle", 1},   {"thispagestyle", 1}, {"fontsize", 2},
      {"rule", 2},         {"phantom", 1},       {"hphantom", 1},     {"vphantom", 1},
      {"newlength", 1},    {"input", 1},         {"include", 1},      {"graphicspath", 1},
      {"captionsetup", 1}, {"newcolumntype", 2}, {"specialrule", 3},  {"resizebox", 2},
      {"scalebox", 1},     {"raisebox", 1},      {"parbox", 1},       {"adjustbox", 1},
      {"multicolumn", 2},  {"multirow", 2},      {"setcitestyle", 1}, {"author", 1},
      {"date", 1},         {"affiliation", 1},   {"email", 1},        {"thanks", 1},
      {"institute", 1},    {"title", 1},         {"newenvironment", 3},
      {"renewenvironment", 3}, {"linespread", 1}, {"setstretch", 1},  {"rowcolors", 3},
      {"textcolor", 1},    {"pgfplotsset", 1},   {"tikzset", 1},      {"noalign", 1},
      {"bibinfo", 1},      {"hyperref", 0},      {"urlstyle", 1},     {"bibitem", 1},
      {"footnotemark", 0}, {"icmlsetsymbol", 2}, {"icmlauthor", 2},   {"icmlaffiliation", 2},
      {"icmlcorrespondingauthor", 2}, {"icmlkeywords", 1}, {"acmConference", 1},
  };
  return m;
}

const std::map<std::string, std::string, std::less<>>& symbol_commands() {
  static const std::map<std::string, std::string, std::less<>> m = {
      {"ldots", "..."}, {"dots", "..."},  {"cdots", "..."}, {"textellipsis", "..."},
      {"pm", "±"},      {"mp", "∓"},      {"times", "×"},   {"dagger", "†"},
      {"ddagger", "‡"}, {"ast", "*"},     {"star", "*"},    {"textasteriskcentered", "*"},
      {"S", "§"},       {"%", "%"},       {"&", "&"},       {"$", "$"},
      {"#", "#"},       {"_", "_"},       {"{", "{"},       {"}", "}"},
      {"LaTeX", "LaTeX"}, {"TeX", "TeX"}, {"textendash", "-"}, {"textemdash", "-"},
      {"leq", "≤"},     {"geq", "≥"},     {"le", "≤"},      {"ge", "≥"},
      {"approx", "≈"},  {"sim", "~"},     {"uparrow", "↑"}, {"downarrow", "↓"},
      {"rightarrow", "→"}, {"leftarrow", "←"}, {"to", "→"}, {"checkmark", "✓"},
      {"alpha", "α"},   {"beta", "β"},    {"gamma", "γ"},   {"delta", "δ"},
      {"epsilon", "ε"}, {"lambda", "λ"},  {"mu", "μ"},      {"sigma", "σ"},
      {"theta", "θ"},   {"tau", "τ"},     {"infty", "∞"},   {"circ", "°"},
      {"textdegree", "°"}, {"textpm", "±"}, {"texttimes", "×"}, {"textbar", "|"},
      {"textless", "<"}, {"textgreater", ">"}, {"slash", "/"}, {"textasciitilde", "~"},
      {"ae", "ae"},     {"oe", "oe"},     {"ss", "ss"},     {"o", "o"},
      {"l", "l"},       {"aa", "a"},      {"i", "i"},       {"j", "j"},
      {"cmark", "✓"},   {"xmark", "✗"},
  };
  return m;
}

const NameSet& space_commands() {
  static const NameSet s = {",", ";", ":", "!", " ", "quad", "qquad", "enspace",
                            "thinspace", "hfill", "newline", "linebreak", "par",
                            "smallskip", "medskip", "bigskip", "noindent", "enskip",
                            "hskip", "vskip", "tabularnewline", "cr", "break", "\n",
                            "\t"};
  return s;
}

bool is_accent(std::string_view name) {
  static const NameSet s = {"'", "`", "^", "\"", "~", "=", ".", "u", "v",
                            "H", "c", "k", "r", "b", "d", "t"};
  return s.contains(name);
}

const NameSet& sectioning_commands() {
  static const NameSet s = {"part", "chapter", "section", "subsection", "subsubsection",
                            "paragraph", "subparagraph"};
  return s;
}

// Number of backslashes immediately preceding position `i`.
std::size_t preceding_backslashes(std::string_view s, std::size_t i) {
  std::size_t n = 0;
  while (i > n && s[i - n - 1] == '\\') ++n;
  return n;
}

std::string ref_kind_name(const std::string& kind) {
  if (kind == "table") return "Table";
  if (kind == "figure") return "Figure";
  if (kind == "section") return "Section";
  if (kind == "equation") return "Equation";
  return "";
}

class PlainWriter {
 public:
  PlainWriter(Mode mode, const RefMap* refs, Diagnostics* diagnostics)
      : mode_(mode), refs_(refs), diagnostics_(diagnostics) {}

  void convert(std::string_view s, bool in_math = false);
  PlainText finish();

 private:
  void emit(std::string_view t) { out_.append(t); }
  void emit_math(std::string_view inner);
  void handle_command(std::string_view s, std::size_t& pos, bool in_math);
  void handle_begin(std::string_view s, std::size_t& pos, std::size_t cmd_start, bool in_math);
  void convert_group_arg(std::string_view s, std::size_t& pos, bool in_math);

  Mode mode_;
  const RefMap* refs_;
  Diagnostics* diagnostics_;
  std::string out_;
  bool emphasised_ = false;
  std::vector<std::string> citations_;
};

void PlainWriter::emit_math(std::string_view inner) {
  if (mode_ == Mode::kDocument) {
    emit(" ");
    emit(kMathPlaceholder);
    emit(" ");
  } else {
    convert(inner, true);
  }
}

void PlainWriter::convert_group_arg(std::string_view s, std::size_t& pos, bool in_math) {
  std::size_t save = pos;
  if (auto g = read_group(s, pos)) {
    convert(*g, in_math);
    return;
  }
  pos = save;
  if (auto a = read_argument(s, pos)) convert(*a, in_math);
}

void PlainWriter::handle_begin(std::string_view s, std::size_t& pos, std::size_t cmd_start,
                               bool in_math) {
  std::size_t after = pos;
  auto name_group = read_group(s, after);
  if (!name_group) return;
  std::string name(*name_group);
  if (is_math_environment(name) || dropped_envs().contains(name) ||
      is_tabular_environment(name)) {
    auto env = find_environment(s, cmd_start, [&](std::string_view n) { return n == name; });
    if (env && env->begin == cmd_start) {
      if (is_math_environment(name)) {
        emit_math(s.substr(env->body_begin, env->body_end - env->body_begin));
      } else {
        emit(" ");
      }
      pos = env->end;
      return;
    }
  }
  pos = after;
  for (int i = 0; i < env_arg_count(name); ++i) {
    std::size_t p = pos;
    read_optional(s, p);
    if (read_group(s, p)) pos = p;
  }
  std::size_t p = pos;
  if (p < s.size() && s[p] == '[' && read_optional(s, p)) pos = p;
  emit(in_math ? " " : "\n");
}

void PlainWriter::handle_command(std::string_view s, std::size_t& pos, bool in_math) {
  const std::size_t cmd_start = pos;
  ++pos;  // backslash
  if (pos >= s.size()) return;
  if (s[pos] == '\\') {
    ++pos;
    std::size_t p = pos;
    if (p < s.size() && s[p] == '*') pos = ++p;
    if (pos < s.size() && s[pos] == '[') read_optional(s, pos);
    emit(mode_ == Mode::kDocument ? "\n" : " ");
    return;
  }
  if (s[pos] == '(' || s[pos] == '[') {
    const char* close = s[pos] == '(' ? "\\)" : "\\]";
    std::size_t end = s.find(close, pos + 1);
    if (end == std::string_view::npos) end = s.size();
    emit_math(s.substr(pos + 1, end - pos - 1));
    pos = std::min(s.size(), end + 2);
    return;
  }
  std::string name(read_command_name(s, pos));
  bool starred = false;
  if (pos < s.size() && s[pos] == '*' && is_letter(name.empty() ? ' ' : name[0])) {
    starred = true;
    ++pos;
  }
  (void)starred;

  if (name == "begin") {
    handle_begin(s, pos, cmd_start, in_math);
    return;
  }
  if (name == "end") {
    read_group(s, pos);
    emit(in_math ? " " : "\n");
    return;
  }
  if (auto it = symbol_commands().find(name); it != symbol_commands().end()) {
    emit(it->second);
    // A control word swallows the following space; keep one for readability.
    return;
  }
  if (space_commands().contains(name)) {
    emit(" ");
    return;
  }
  if (is_accent(name)) {
    convert_group_arg(s, pos, in_math);
    return;
  }
  if (name == "item") {
    emit("\n");
    std::size_t p = pos;
    if (auto opt = read_optional(s, p); opt && p > pos) {
      pos = p;
      convert(*opt, in_math);
      emit(" ");
    }
    return;
  }
  if (name == "ensuremath") {
    std::size_t p = pos;
    if (auto g = read_group(s, p)) {
      pos = p;
      if (in_math) {
        convert(*g, true);
      } else {
        emit_math(*g);
      }
    }
    return;
  }
  if (cite_commands().contains(name)) {
    while (true) {
      std::size_t p = pos;
      skip_spaces(s, p);
      if (p < s.size() && s[p] == '[' && read_optional(s, p)) {
        pos = p;
        continue;
      }
      break;
    }
    auto g = read_group(s, pos);
    if (!g) return;
    std::vector<std::string> keys;
    for (auto& k : text::split(*g, ',')) {
      auto t = text::trim(k);
      if (!t.empty()) keys.push_back(t);
    }
    if (mode_ == Mode::kDocument) {
      emit("[" + text::join(keys, ", ") + "]");
    } else {
      citations_.insert(citations_.end(), keys.begin(), keys.end());
    }
    return;
  }
  if (ref_commands().contains(name)) {
    std::size_t p = pos;
    if (p < s.size() && s[p] == '[') read_optional(s, p);
    auto g = read_group(s, p);
    if (!g) return;
    pos = p;
    std::vector<std::string> rendered;
    for (auto& raw : text::split(*g, ',')) {
      auto label = text::trim(raw);
      const RefTarget* target = nullptr;
      if (refs_) {
        if (auto it = refs_->find(label); it != refs_->end()) target = &it->second;
      }
      std::string number = target ? target->number : "??";
      bool named = name == "autoref" || name == "cref" || name == "Cref" || name == "vref" ||
                   name == "Vref" || name == "nameref";
      if (named && target && !ref_kind_name(target->kind).empty()) {
        rendered.push_back(ref_kind_name(target->kind) + " " + number);
      } else if (name == "eqref") {
        rendered.push_back("(" + number + ")");
      } else {
        rendered.push_back(number);
      }
    }
    emit(text::join(rendered, ", "));
    return;
  }
  if (emphasis_declarations().contains(name)) {
    emphasised_ = true;
    return;
  }
  if (name == "footnote" || name == "footnotetext") {
    if (pos < s.size() && s[pos] == '[') read_optional(s, pos);
    emit(" ");
    convert_group_arg(s, pos, in_math);
    emit(" ");
    return;
  }
  if (name == "href") {
    read_group(s, pos);
    convert_group_arg(s, pos, in_math);
    return;
  }
  if (name == "textcolor") {
    emphasised_ = true;
    if (pos < s.size() && s[pos] == '[') read_optional(s, pos);
    read_group(s, pos);
    convert_group_arg(s, pos, in_math);
    return;
  }
  if (emphasis_commands().contains(name)) {
    emphasised_ = true;
    convert_group_arg(s, pos, in_math);
    return;
  }
  if (name == "cmidrule" || name == "cmidrule*") {
    std::size_t p = pos;
    if (p < s.size() && s[p] == '[') read_optional(s, p);
    skip_spaces(s, p);
    if (p < s.size() && s[p] == '(') {
      auto close = s.find(')', p);
      if (close != std::string_view::npos) p = close + 1;
    }
    if (read_group(s, p)) pos = p;
    return;
  }
  if (name == "multirow") {
    // \multirow[vpos]{rows}[struts]{width}[fixup]{text}
    std::size_t p = pos;
    read_optional(s, p);
    read_group(s, p);
    read_optional(s, p);
    skip_spaces(s, p);
    if (p < s.size() && (s[p] == '*' || s[p] == '=')) {
      ++p;
    } else {
      read_group(s, p);
    }
    read_optional(s, p);
    pos = p;
    convert_group_arg(s, pos, in_math);
    return;
  }
  if (name == "color" || name == "cellcolor" || name == "rowcolor") {
    emphasised_ = true;
  }
  if (auto it = dropped_arg_commands().find(name); it != dropped_arg_commands().end()) {
    for (int i = 0; i < it->second; ++i) {
      std::size_t p = pos;
      while (true) {
        std::size_t q = p;
        skip_spaces(s, q);
        if (q < s.size() && s[q] == '[' && read_optional(s, q)) {
          p = q;
          continue;
        }
        break;
      }
      if (!read_group(s, p)) break;
      pos = p;
    }
    return;
  }
  if (sectioning_commands().contains(name)) {
    std::size_t p = pos;
    if (p < s.size() && s[p] == '[') read_optional(s, p);
    if (auto g = read_group(s, p)) {
      pos = p;
      emit("\n\n");
      convert(*g, in_math);
      emit("\n\n");
    }
    return;
  }
  // Unknown command: drop the name and any directly attached optional
  // argument; braces that follow are unwrapped by the caller's loop.
  if (pos < s.size() && s[pos] == '[') {
    std::size_t p = pos;
    if (read_optional(s, p)) pos = p;
  }
}

void PlainWriter::convert(std::string_view s, bool in_math) {
  std::size_t pos = 0;
  while (pos < s.size()) {
    char c = s[pos];
    switch (c) {
      case '\\':
        handle_command(s, pos, in_math);
        break;
      case '$': {
        if (in_math) {
          ++pos;
          break;
        }
        bool display = pos + 1 < s.size() && s[pos + 1] == '$';
        std::size_t start = pos + (display ? 2 : 1);
        std::size_t end = start;
        while (end < s.size()) {
          if (s[end] == '$' && preceding_backslashes(s, end) % 2 == 0) break;
          ++end;
        }
        emit_math(s.substr(start, end - start));
        pos = std::min(s.size(), end + (display ? 2 : 1));
        break;
      }
      case '{':
      case '}':
        ++pos;
        break;
      case '~':
        emit(" ");
        ++pos;
        break;
      case '&':
        emit(" ");
        ++pos;
        break;
      case '^':
      case '_':
        if (in_math) {
          ++pos;
        } else {
          emit(std::string(1, c));
          ++pos;
        }
        break;
      case '-': {
        std::size_t n = 0;
        while (pos + n < s.size() && s[pos + n] == '-') ++n;
        emit(n >= 2 && !in_math ? "-" : std::string(n, '-'));
        pos += n;
        break;
      }
      case '`':
        if (pos + 1 < s.size() && s[pos + 1] == '`') {
          emit("\"");
          pos += 2;
        } else {
          emit("'");
          ++pos;
        }
        break;
      case '\'':
        if (pos + 1 < s.size() && s[pos + 1] == '\'') {
          emit("\"");
          pos += 2;
        } else {
          emit("'");
          ++pos;
        }
        break;
      default:
        out_ += c;
        ++pos;
        break;
    }
  }
}

PlainText PlainWriter::finish() {
  PlainText result;
  if (mode_ == Mode::kCell) {
    result.text = text::squash_whitespace(out_);
  } else {
    // Keep paragraph breaks, collapse everything else.
    std::string norm;
    std::size_t i = 0;
    while (i < out_.size()) {
      if (is_space(out_[i])) {
        std::size_t j = i;
        int newlines = 0;
        while (j < out_.size() && is_space(out_[j])) newlines += out_[j++] == '\n';
        if (!norm.empty() && j < out_.size()) norm += newlines >= 2 ? "\n\n" : " ";
        i = j;
      } else {
        norm += out_[i++];
      }
    }
    result.text = std::move(norm);
  }
  result.emphasised = emphasised_;
  result.citations = std::move(citations_);
  return result;
}

}  // namespace

bool is_tabular_environment(std::string_view name) { return tabular_envs().contains(name); }
bool is_math_environment(std::string_view name) { return math_envs().contains(name); }

std::string strip_comments(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] == '%' && preceding_backslashes(s, i) % 2 == 0) {
      std::size_t eol = s.find('\n', i);
      if (eol == std::string_view::npos) break;
      i = eol + 1;
      // A comment swallows its newline and the next line's indentation, but
      // a blank line after it still ends the paragraph.
      while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
      if (i < s.size() && s[i] == '\n') out += '\n';
      continue;
    }
    out += s[i++];
  }
  return out;
}

void skip_spaces(std::string_view s, std::size_t& pos) {
  while (pos < s.size() && is_space(s[pos])) ++pos;
}

std::string_view read_command_name(std::string_view s, std::size_t& pos) {
  std::size_t start = pos;
  if (pos >= s.size()) return {};
  if (!is_letter(s[pos])) {
    ++pos;
    return s.substr(start, 1);
  }
  while (pos < s.size() && (is_letter(s[pos]) || s[pos] == '@')) ++pos;
  return s.substr(start, pos - start);
}

std::size_t matching_brace(std::string_view s, std::size_t open) {
  int depth = 0;
  for (std::size_t i = open; i < s.size(); ++i) {
    char c = s[i];
    if (c == '\\') {
      ++i;
      continue;
    }
    if (c == '{') ++depth;
    if (c == '}' && --depth == 0) return i;
  }
  return std::string_view::npos;
}

std::optional<std::string_view> read_group(std::string_view s, std::size_t& pos) {
  std::size_t p = pos;
  skip_spaces(s, p);
  if (p >= s.size() || s[p] != '{') return std::nullopt;
  std::size_t close = matching_brace(s, p);
  if (close == std::string_view::npos) return std::nullopt;
  pos = close + 1;
  return s.substr(p + 1, close - p - 1);
}

std::optional<std::string_view> read_optional(std::string_view s, std::size_t& pos) {
  std::size_t p = pos;
  skip_spaces(s, p);
  if (p >= s.size() || s[p] != '[') return std::nullopt;
  int depth = 0;
  int brace = 0;
  for (std::size_t i = p; i < s.size(); ++i) {
    char c = s[i];
    if (c == '\\') {
      ++i;
      continue;
    }
    if (c == '{') ++brace;
    if (c == '}') --brace;
    if (brace > 0) continue;
    if (c == '[') ++depth;
    if (c == ']' && --depth == 0) {
      pos = i + 1;
      return s.substr(p + 1, i - p - 1);
    }
  }
  return std::nullopt;
}

std::optional<std::string> read_argument(std::string_view s, std::size_t& pos) {
  std::size_t p = pos;
  if (auto g = read_group(s, p)) {
    pos = p;
    return std::string(*g);
  }
  skip_spaces(s, p);
  if (p >= s.size()) return std::nullopt;
  if (s[p] == '\\') {
    std::size_t q = p + 1;
    read_command_name(s, q);
    pos = q;
    return std::string(s.substr(p, q - p));
  }
  if (s[p] == '}') return std::nullopt;
  pos = p + 1;
  return std::string(1, s[p]);
}

std::optional<EnvSpan> find_environment(std::string_view s, std::size_t pos,
                                        const std::function<bool(std::string_view)>& accept) {
  static constexpr std::string_view kBegin = "\\begin";
  static constexpr std::string_view kEnd = "\\end";
  while (true) {
    std::size_t b = s.find(kBegin, pos);
    if (b == std::string_view::npos) return std::nullopt;
    std::size_t p = b + kBegin.size();
    auto name = read_group(s, p);
    if (!name || !accept(*name)) {
      pos = b + kBegin.size();
      continue;
    }
    EnvSpan span;
    span.name = std::string(*name);
    span.begin = b;
    span.body_begin = p;
    int depth = 1;
    std::size_t q = p;
    while (true) {
      std::size_t nb = s.find(kBegin, q);
      std::size_t ne = s.find(kEnd, q);
      if (ne == std::string_view::npos) {
        span.body_end = s.size();
        span.end = s.size();
        return span;
      }
      if (nb != std::string_view::npos && nb < ne) {
        std::size_t r = nb + kBegin.size();
        auto inner = read_group(s, r);
        if (inner && *inner == span.name) ++depth;
        q = nb + kBegin.size();
        continue;
      }
      std::size_t r = ne + kEnd.size();
      auto inner = read_group(s, r);
      if (inner && *inner == span.name && --depth == 0) {
        span.body_end = ne;
        span.end = r;
        return span;
      }
      q = ne + kEnd.size();
    }
  }
}

std::string extract_macro_definitions(std::string_view s, MacroTable& table,
                                      Diagnostics* diagnostics) {
  std::string out;
  out.reserve(s.size());
  std::size_t pos = 0;
  while (pos < s.size()) {
    if (s[pos] != '\\') {
      out += s[pos++];
      continue;
    }
    std::size_t p = pos + 1;
    std::string_view cmd = read_command_name(s, p);
    bool is_newcommand = cmd == "newcommand" || cmd == "renewcommand" ||
                         cmd == "providecommand" || cmd == "DeclareRobustCommand";
    if (is_newcommand || cmd == "DeclareMathOperator") {
      if (p < s.size() && s[p] == '*') ++p;
      std::string name;
      std::size_t q = p;
      if (auto g = read_group(s, q)) {
        name = text::trim(*g);
      } else {
        skip_spaces(s, q);
        if (q < s.size() && s[q] == '\\') {
          std::size_t r = q + 1;
          read_command_name(s, r);
          name = std::string(s.substr(q, r - q));
          q = r;
        }
      }
      if (name.size() < 2 || name[0] != '\\') {
        out += s[pos++];
        continue;
      }
      int nargs = 0;
      std::optional<std::string> default_arg;
      if (is_newcommand) {
        std::size_t r = q;
        if (auto n = read_optional(s, r)) {
          nargs = std::atoi(std::string(*n).c_str());
          q = r;
          if (auto d = read_optional(s, r)) {
            default_arg = std::string(*d);
            q = r;
          }
        }
      }
      auto body = read_group(s, q);
      if (!body) {
        out += s[pos++];
        continue;
      }
      if (nargs <= 1) {
        MacroDefinition def;
        def.num_args = nargs;
        def.body = std::string(*body);
        if (cmd == "DeclareMathOperator") def.body = "\\operatorname{" + def.body + "}";
        if (cmd != "providecommand" || !table.contains(name.substr(1))) {
          table[name.substr(1)] = def;
        }
      } else if (diagnostics) {
        diagnostics->add("UnsupportedMacro", name + " takes " + std::to_string(nargs) +
                                                 " arguments; left unexpanded");
      }
      pos = q;
      continue;
    }
    if (cmd == "def" || cmd == "gdef" || cmd == "edef") {
      std::size_t q = p;
      skip_spaces(s, q);
      if (q >= s.size() || s[q] != '\\') {
        out += s[pos++];
        continue;
      }
      std::size_t r = q + 1;
      std::string name(read_command_name(s, r));
      std::size_t brace = s.find('{', r);
      if (brace == std::string_view::npos) {
        out += s[pos++];
        continue;
      }
      std::string_view params = s.substr(r, brace - r);
      int nargs = static_cast<int>(std::count(params.begin(), params.end(), '#'));
      std::size_t close = matching_brace(s, brace);
      if (close == std::string_view::npos) {
        out += s[pos++];
        continue;
      }
      if (nargs <= 1 && text::trim(params).size() == static_cast<std::size_t>(nargs) * 2) {
        table[name] = MacroDefinition{nargs, std::string(s.substr(brace + 1, close - brace - 1))};
      } else if (diagnostics) {
        diagnostics->add("UnsupportedMacro", "\\" + name + " has an unsupported parameter text");
      }
      pos = close + 1;
      continue;
    }
    out.append(s.substr(pos, p - pos));
    pos = p;
  }
  return out;
}

namespace {

std::string substitute(std::string_view body, const std::string& arg) {
  std::string out;
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (body[i] == '#' && i + 1 < body.size() && body[i + 1] == '1') {
      out += arg;
      ++i;
    } else {
      out += body[i];
    }
  }
  return out;
}

void expand_into(std::string_view s, const MacroTable& table, int depth, int limit,
                 std::string& out, Diagnostics* diagnostics, bool& reported) {
  std::size_t pos = 0;
  while (pos < s.size()) {
    if (s[pos] != '\\') {
      out += s[pos++];
      continue;
    }
    std::size_t p = pos + 1;
    std::string_view name = read_command_name(s, p);
    auto it = table.find(std::string(name));
    if (name.empty() || !is_letter(name[0]) || it == table.end()) {
      out.append(s.substr(pos, p - pos));
      pos = p;
      continue;
    }
    std::string arg;
    if (it->second.num_args == 1) {
      std::size_t q = p;
      if (auto a = read_argument(s, q)) {
        arg = *a;
        p = q;
      }
    }
    if (depth >= limit) {
      if (!reported && diagnostics) {
        diagnostics->add("MacroDepthExceeded",
                         "expansion of \\" + std::string(name) + " exceeded depth " +
                             std::to_string(limit));
      }
      reported = true;
      pos = p;
      continue;
    }
    std::string body = substitute(it->second.body, arg);
    expand_into(body, table, depth + 1, limit, out, diagnostics, reported);
    pos = p;
  }
}

}  // namespace

std::string expand_macros(std::string_view s, const MacroTable& table, int depth_limit,
                          Diagnostics* diagnostics) {
  if (table.empty()) return std::string(s);
  std::string out;
  out.reserve(s.size());
  bool reported = false;
  expand_into(s, table, 0, depth_limit, out, diagnostics, reported);
  return out;
}

PlainText to_plain(std::string_view s, Mode mode, const RefMap* refs, Diagnostics* diagnostics) {
  PlainWriter writer(mode, refs, diagnostics);
  writer.convert(s);
  return writer.finish();
}

}  // namespace axtract::latex
