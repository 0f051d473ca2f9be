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


#include "axtract/segmentation.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "axtract/error.hpp"
#include "axtract/numeric.hpp"
#include "axtract/text.hpp"
#include "json.hpp"

namespace axtract {

using nlohmann::json;

std::string to_string(CellLabel label) {
  switch (label) {
    case CellLabel::kDataset:
      return "dataset";
    case CellLabel::kMetric:
      return "metric";
    case CellLabel::kPaperModel:
      return "paper_model";
    case CellLabel::kCitedModel:
      return "cited_model";
    case CellLabel::kOther:
      return "other";
    case CellLabel::kNumeric:
      return "numeric";
  }
  return "other";
}

CellLabel parse_cell_label(std::string_view name) {
  std::string n = text::to_lower(name);
  if (n == "dataset") return CellLabel::kDataset;
  if (n == "metric") return CellLabel::kMetric;
  if (n == "paper_model" || n == "model-paper") return CellLabel::kPaperModel;
  if (n == "cited_model" || n == "model-cited") return CellLabel::kCitedModel;
  if (n == "other" || n == "task" || n == "meta" || n.empty()) return CellLabel::kOther;
  if (n == "numeric") return CellLabel::kNumeric;
  throw Error(ErrorCode::kMalformedGold, "unknown cell class '" + std::string(name) + "'");
}

std::vector<std::string> retrieve_cell_evidence(const Cell& cell, const FragmentIndex& index,
                                                std::size_t k) {
  std::vector<std::string> out;
  std::string query = text::trim(cell.content);
  if (query.empty() || k == 0) return out;
  for (const auto& hit : index.search(query, k)) {
    out.push_back(text::replace_all_icase(hit.fragment->text, query, kMaskToken));
  }
  return out;
}

LabeledExample cell_example(const RawTable& table, std::size_t row, std::size_t col,
                            const FragmentIndex& index, std::size_t k) {
  CellBundle bundle;
  bundle.table = &table;
  bundle.row = row;
  bundle.col = col;
  bundle.masked_mentions = retrieve_cell_evidence(table.at(row, col), index, k);
  return featurize(bundle);
}

SegmentedTable segment_table(const RawTable& table, const ClassifierModel& model,
                             const FragmentIndex& index, std::size_t k) {
  SegmentedTable seg;
  seg.table = table;
  seg.classes.assign(table.rows(), std::vector<CellLabel>(table.cols(), CellLabel::kOther));
  for (std::size_t r = 0; r < table.rows(); ++r) {
    for (std::size_t c = 0; c < table.cols(); ++c) {
      const Cell& cell = table.at(r, c);
      if (text::trim(cell.content).empty()) continue;
      if (is_numeric(cell.content)) {
        seg.classes[r][c] = CellLabel::kNumeric;
        continue;
      }
      auto dist = model.predict(cell_example(table, r, c, index, k));
      seg.classes[r][c] = parse_cell_label(dist.argmax());
    }
  }
  return seg;
}

GoldSegmentation parse_gold_segmentation(std::string_view data, const std::filesystem::path& base_dir) {
  GoldSegmentation gold;
  try {
    json j = json::parse(data);
    if (j.contains("papers")) {
      for (const auto& [pid, path] : j.at("papers").items()) {
        gold.papers[pid] = base_dir / path.get<std::string>();
      }
    }
    for (const auto& t : j.at("tables")) {
      GoldTable g;
      g.paper_id = t.at("paper_id").get<std::string>();
      g.table_id = t.at("table_id").get<std::string>();
      g.type = parse_table_type(t.value("type", "irrelevant"));
      if (t.contains("labels")) {
        for (const auto& row : t.at("labels")) {
          std::vector<CellLabel> labels;
          for (const auto& l : row) labels.push_back(parse_cell_label(l.get<std::string>()));
          g.labels.push_back(std::move(labels));
        }
      }
      if (t.contains("links")) {
        for (const auto& l : t.at("links")) {
          g.links.push_back({l.at("row").get<std::size_t>(), l.at("col").get<std::size_t>(),
                             l.at("task").get<std::string>(), l.at("dataset").get<std::string>(),
                             l.at("metric").get<std::string>()});
        }
      }
      if (t.contains("cells")) {
        g.cells = t.at("cells").get<std::vector<std::vector<std::string>>>();
        if (!g.labels.empty() && g.cells.size() != g.labels.size()) {
          throw Error(ErrorCode::kMalformedGold, g.table_id + ": cells and labels differ in shape");
        }
      }
      gold.tables.push_back(std::move(g));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedGold, e.what());
  }
  for (const auto& t : gold.tables) {
    if (!gold.papers.contains(t.paper_id)) {
      throw Error(ErrorCode::kMalformedGold, "no source listed for paper " + t.paper_id);
    }
  }
  return gold;
}

GoldSegmentation load_gold_segmentation(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_gold_segmentation(ss.str(), path.parent_path());
}

GoldCorpus::GoldCorpus(const GoldSegmentation& gold, const IngestOptions& ingest_options, Bm25Params bm25)
    : gold_(gold) {
  for (const auto& [pid, path] : gold_.papers) {
    PaperSource src = load_bundle(path);
    src.paper_id = pid;
    auto result = ingest(src, ingest_options);
    indexes_.emplace(pid, build_index(result.document, bm25));
    documents_.emplace(pid, std::move(result.document));
  }
  for (const auto& g : gold_.tables) {
    const PaperDocument& doc = documents_.at(g.paper_id);
    auto it = std::find_if(doc.tables.begin(), doc.tables.end(),
                           [&](const RawTable& t) { return t.table_id == g.table_id; });
    if (it == doc.tables.end()) {
      throw Error(ErrorCode::kMalformedGold, g.paper_id + ": no table " + g.table_id);
    }
    if (!g.labels.empty()) {
      if (g.labels.size() != it->rows() ||
          std::any_of(g.labels.begin(), g.labels.end(),
                      [&](const auto& row) { return row.size() != it->cols(); })) {
        throw Error(ErrorCode::kMalformedGold, g.paper_id + "/" + g.table_id +
                                                   ": label grid does not match the table");
      }
    }
    for (std::size_t r = 0; r < g.cells.size(); ++r) {
      for (std::size_t c = 0; c < g.cells[r].size(); ++c) {
        if (r >= it->rows() || c >= it->cols() || it->at(r, c).content != g.cells[r][c]) {
          throw Error(ErrorCode::kMalformedGold, g.paper_id + "/" + g.table_id + ": cell (" +
                                                     std::to_string(r) + ", " + std::to_string(c) +
                                                     ") does not match the extraction");
        }
      }
    }
    for (const auto& link : g.links) {
      if (link.row >= it->rows() || link.col >= it->cols()) {
        throw Error(ErrorCode::kMalformedGold, g.paper_id + "/" + g.table_id + ": link outside the table");
      }
    }
    views_.push_back({&g, &*it, &doc, &indexes_.at(g.paper_id)});
  }
}

ClassifierModel train_segmenter(const GoldCorpus& corpus, std::size_t k, const TrainConfig& config) {
  std::vector<std::pair<std::string, LabeledExample>> keyed;
  for (const auto& view : corpus.views()) {
    if (view.gold->labels.empty()) continue;
    const RawTable& t = *view.table;
    for (std::size_t r = 0; r < t.rows(); ++r) {
      for (std::size_t c = 0; c < t.cols(); ++c) {
        const Cell& cell = t.at(r, c);
        if (text::trim(cell.content).empty() || is_numeric(cell.content)) continue;
        CellLabel label = view.gold->labels[r][c];
        if (label == CellLabel::kNumeric) label = CellLabel::kOther;
        LabeledExample ex = cell_example(t, r, c, *view.index, k);
        ex.label = to_string(label);
        json key = {{"t", ex.text_fields}, {"c", ex.categorical_fields}, {"l", ex.label}};
        keyed.emplace_back(key.dump(), std::move(ex));
      }
    }
  }
  std::sort(keyed.begin(), keyed.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<LabeledExample> examples;
  for (auto& [_, ex] : keyed) examples.push_back(std::move(ex));
  TrainConfig cfg = config;
  cfg.labels.clear();
  for (CellLabel l : kSegmentationClasses) cfg.labels.push_back(to_string(l));
  return train(examples, cfg);
}

SegmentedTable gold_segmented_table(const GoldTableView& view) {
  SegmentedTable seg;
  seg.table = *view.table;
  const RawTable& t = *view.table;
  seg.classes.assign(t.rows(), std::vector<CellLabel>(t.cols(), CellLabel::kOther));
  for (std::size_t r = 0; r < t.rows(); ++r) {
    for (std::size_t c = 0; c < t.cols(); ++c) {
      const Cell& cell = t.at(r, c);
      if (text::trim(cell.content).empty()) continue;
      if (is_numeric(cell.content)) {
        seg.classes[r][c] = CellLabel::kNumeric;
      } else if (!view.gold->labels.empty() && view.gold->labels[r][c] != CellLabel::kNumeric) {
        seg.classes[r][c] = view.gold->labels[r][c];
      }
    }
  }
  seg.type.decided_type = view.gold->type;
  seg.type.leaderboard_prob = view.gold->type == TableType::kLeaderboard ? 1.0 : 0.0;
  seg.type.ablation_prob = view.gold->type == TableType::kAblation ? 1.0 : 0.0;
  return seg;
}

}  // namespace axtract
