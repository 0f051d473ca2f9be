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


#include "support.hpp"

#include <atomic>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "axtract/error.hpp"

namespace axtract::testing {

namespace fs = std::filesystem;

fs::path data_dir() { return AXTRACT_DATA_DIR; }

fs::path cli_path() { return AXTRACT_CLI_PATH; }

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& data) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << data;
}

TempDir::TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  path_ = fs::temp_directory_path() /
          ("axtract-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  fs::remove_all(path_);
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

PaperSource source_from(const std::string& paper_id, const std::string& main_tex,
                        std::map<std::string, std::string> extra_files) {
  PaperSource src;
  src.paper_id = paper_id;
  src.files = std::move(extra_files);
  src.files["main.tex"] = main_tex;
  src.main_file = "main.tex";
  return src;
}

PaperDocument ingest_tex(const std::string& paper_id, const std::string& main_tex) {
  return ingest(source_from(paper_id, main_tex)).document;
}

RawTable make_table(const std::string& table_id, const std::vector<std::vector<std::string>>& rows,
                    const std::string& caption) {
  RawTable t;
  t.table_id = table_id;
  t.caption = caption;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::vector<Cell> row;
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      Cell cell;
      cell.content = rows[r][c];
      cell.is_header = r == 0 || c == 0;
      cell.span_origin = {r, c};
      row.push_back(std::move(cell));
    }
    t.grid.push_back(std::move(row));
  }
  return t;
}

std::vector<fs::path> minicorpus_sources() {
  fs::path p = data_dir() / "papers";
  return {p / "scalenet", p / "headline", p / "transmt.tar.gz", p / "ulmtext", p / "corpusstats"};
}

TrainConfig minicorpus_segmenter_config() {
  TrainConfig tc;
  tc.field_weights = {{"text", 0.3},        {"row_context", 0.3}, {"column_context", 0.3},
                      {"has_reference", 4}, {"cell_content", 3}};
  return tc;
}

MiniCorpusModels train_minicorpus_models() {
  auto gold = load_gold_segmentation(data_dir() / "segmentation.json");
  GoldCorpus corpus(gold);
  std::vector<std::pair<RawTable, TableType>> typed;
  for (const auto& v : corpus.views()) typed.emplace_back(*v.table, v.gold->type);
  return {train_table_type(typed), train_segmenter(corpus, kDefaultEvidenceDepth, minicorpus_segmenter_config())};
}

PipelineConfig minicorpus_config(EvidenceStrategy strategy) {
  PipelineConfig cfg = load_config(data_dir() / "config.json");
  cfg.strategy = strategy;
  return cfg;
}

}  // namespace axtract::testing
