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


#include "axtract/serialization.hpp"

#include "axtract/error.hpp"

namespace axtract {

Json to_json(const Cell& cell) {
  return {{"content", cell.content},
          {"is_emphasised", cell.is_emphasised},
          {"style", cell.style},
          {"reference_keys", cell.reference_keys},
          {"is_header", cell.is_header},
          {"span_origin", {cell.span_origin.row, cell.span_origin.col}}};
}

Json to_json(const RawTable& table) {
  Json grid = Json::array();
  for (const auto& row : table.grid) {
    Json r = Json::array();
    for (const auto& c : row) r.push_back(to_json(c));
    grid.push_back(std::move(r));
  }
  Json j = {{"table_id", table.table_id}, {"caption", table.caption}};
  j["float_label"] = table.float_label ? Json(*table.float_label) : Json(nullptr);
  j["ordinal"] = table.ordinal;
  j["grid"] = std::move(grid);
  return j;
}

Json to_json(const PaperDocument& doc) {
  Json sections = Json::array();
  for (const auto& s : doc.sections) sections.push_back({{"heading", s.heading}, {"body", s.body}});
  Json refs = Json::array();
  for (const auto& r : doc.references) refs.push_back({{"key", r.key}, {"text", r.text}});
  Json tables = Json::array();
  for (const auto& t : doc.tables) tables.push_back(to_json(t));
  return {{"paper_id", doc.paper_id}, {"title", doc.title},       {"abstract", doc.abstract},
          {"sections", sections},     {"references", refs},       {"tables", tables}};
}

Json to_json(const TableTypePrediction& p) {
  return {{"leaderboard_prob", p.leaderboard_prob},
          {"ablation_prob", p.ablation_prob},
          {"decided_type", to_string(p.decided_type)}};
}

Json to_json(const SegmentedTable& seg) {
  Json classes = Json::array();
  for (const auto& row : seg.classes) {
    Json r = Json::array();
    for (CellLabel l : row) r.push_back(to_string(l));
    classes.push_back(std::move(r));
  }
  Json j = to_json(seg.table);
  j["type"] = to_json(seg.type);
  j["classes"] = std::move(classes);
  return j;
}

Json to_json(const ScoredCandidate& c) {
  Json j = {{"paper_id", c.paper_id},
            {"leaderboard_id", c.leaderboard_id},
            {"task", c.task},
            {"dataset", c.dataset},
            {"metric", c.metric},
            {"confidence", c.posterior},
            {"raw_value", c.raw_value},
            {"value", c.normalized_value},
            {"table_id", c.table_id},
            {"row", c.row},
            {"col", c.col}};
  if (c.model) {
    j["model"] = c.model->name;
    j["model_class"] = to_string(c.model->label);
  } else {
    j["model"] = nullptr;
    j["model_class"] = nullptr;
  }
  return j;
}

Json to_json(const ResultRecord& r) {
  return {{"paper_id", r.paper_id}, {"task", r.task},
          {"dataset", r.dataset},   {"metric", r.metric},
          {"value", r.value},       {"model", r.model},
          {"confidence", r.confidence}, {"table_id", r.table_id},
          {"row", r.row},           {"col", r.col},
          {"leaderboard_id", r.leaderboard_id}};
}

Json to_json(const std::vector<ResultRecord>& records) {
  Json j = Json::array();
  for (const auto& r : records) j.push_back(to_json(r));
  return j;
}

Json to_json(const Diagnostic& d) {
  return {{"paper_id", d.paper_id}, {"kind", d.kind}, {"message", d.message}};
}

Cell cell_from_json(const Json& j) {
  Cell c;
  c.content = j.at("content").get<std::string>();
  c.is_emphasised = j.at("is_emphasised").get<bool>();
  c.style = j.at("style").get<std::vector<std::string>>();
  c.reference_keys = j.at("reference_keys").get<std::vector<std::string>>();
  c.is_header = j.at("is_header").get<bool>();
  c.span_origin = {j.at("span_origin").at(0).get<std::size_t>(), j.at("span_origin").at(1).get<std::size_t>()};
  return c;
}

RawTable table_from_json(const Json& j) {
  RawTable t;
  t.table_id = j.at("table_id").get<std::string>();
  t.caption = j.at("caption").get<std::string>();
  if (j.contains("float_label") && !j.at("float_label").is_null()) {
    t.float_label = j.at("float_label").get<std::string>();
  }
  t.ordinal = j.value("ordinal", 0);
  for (const auto& row : j.at("grid")) {
    std::vector<Cell> cells;
    for (const auto& c : row) cells.push_back(cell_from_json(c));
    t.grid.push_back(std::move(cells));
  }
  return t;
}

PaperDocument document_from_json(const Json& j) {
  PaperDocument d;
  d.paper_id = j.at("paper_id").get<std::string>();
  d.title = j.at("title").get<std::string>();
  d.abstract = j.at("abstract").get<std::string>();
  for (const auto& s : j.at("sections")) {
    d.sections.push_back({s.at("heading").get<std::string>(), s.at("body").get<std::string>()});
  }
  for (const auto& r : j.at("references")) {
    d.references.push_back({r.at("key").get<std::string>(), r.at("text").get<std::string>()});
  }
  for (const auto& t : j.at("tables")) d.tables.push_back(table_from_json(t));
  return d;
}

SegmentedTable segmented_from_json(const Json& j) {
  SegmentedTable seg;
  seg.table = table_from_json(j);
  const auto& type = j.at("type");
  seg.type.leaderboard_prob = type.at("leaderboard_prob").get<double>();
  seg.type.ablation_prob = type.at("ablation_prob").get<double>();
  seg.type.decided_type = parse_table_type(type.at("decided_type").get<std::string>());
  for (const auto& row : j.at("classes")) {
    std::vector<CellLabel> labels;
    for (const auto& l : row) labels.push_back(parse_cell_label(l.get<std::string>()));
    seg.classes.push_back(std::move(labels));
  }
  return seg;
}

ResultRecord record_from_json(const Json& j) {
  ResultRecord r;
  r.paper_id = j.value("paper_id", "");
  r.task = j.at("task").get<std::string>();
  r.dataset = j.at("dataset").get<std::string>();
  r.metric = j.at("metric").get<std::string>();
  r.value = j.at("value").get<double>();
  r.model = j.contains("model") && !j.at("model").is_null() ? j.at("model").get<std::string>() : "";
  r.confidence = j.value("confidence", 0.0);
  r.table_id = j.value("table_id", "");
  r.row = j.value("row", std::size_t{0});
  r.col = j.value("col", std::size_t{0});
  r.leaderboard_id = j.value("leaderboard_id", "");
  return r;
}

std::vector<ResultRecord> records_from_json(const Json& j) {
  std::vector<ResultRecord> out;
  try {
    const Json& list = j.is_object() ? j.at("records") : j;
    for (const auto& r : list) out.push_back(record_from_json(r));
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kMalformedGold, std::string("malformed records: ") + e.what());
  }
  return out;
}

std::string dump(const Json& j) {
  return j.dump(2, ' ', false, Json::error_handler_t::replace) + "\n";
}

}  // namespace axtract
