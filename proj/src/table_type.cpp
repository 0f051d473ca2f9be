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


#include "axtract/table_type.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "axtract/error.hpp"
#include "axtract/text.hpp"
#include "json.hpp"

namespace axtract {

using nlohmann::json;

namespace {

constexpr const char* kPositive = "yes";
constexpr const char* kNegative = "no";

std::string example_key(const LabeledExample& ex) {
  json j = {{"t", ex.text_fields}, {"c", ex.categorical_fields}, {"l", ex.label}};
  return j.dump();
}

}  // namespace

std::string to_string(TableType type) {
  switch (type) {
    case TableType::kLeaderboard:
      return "leaderboard";
    case TableType::kAblation:
      return "ablation";
    case TableType::kIrrelevant:
      return "irrelevant";
  }
  return "irrelevant";
}

TableType parse_table_type(std::string_view name) {
  std::string n = text::to_lower(name);
  if (n == "leaderboard") return TableType::kLeaderboard;
  if (n == "ablation") return TableType::kAblation;
  if (n == "irrelevant" || n == "other") return TableType::kIrrelevant;
  throw Error(ErrorCode::kMalformedGold, "unknown table type '" + std::string(name) + "'");
}

TableType decide_table_type(double leaderboard_prob, double ablation_prob, double threshold) {
  bool lb = leaderboard_prob >= threshold;
  bool ab = ablation_prob >= threshold;
  if (!lb && !ab) return TableType::kIrrelevant;
  if (lb && (!ab || leaderboard_prob >= ablation_prob)) return TableType::kLeaderboard;
  return TableType::kAblation;
}

LabeledExample table_example(const RawTable& table) {
  LabeledExample ex;
  std::string body;
  for (const auto& row : table.grid) {
    for (const auto& cell : row) {
      if (cell.content.empty()) continue;
      if (!body.empty()) body += ' ';
      body += cell.content;
    }
  }
  ex.text_fields["caption"] = table.caption;
  ex.text_fields["table_text"] = body;
  return ex;
}

TableTypePrediction classify_table_type(const RawTable& table, const TableTypeModel& model,
                                        double threshold) {
  LabeledExample ex = table_example(table);
  TableTypePrediction p;
  p.leaderboard_prob = model.leaderboard.predict(ex)[kPositive];
  p.ablation_prob = model.ablation.predict(ex)[kPositive];
  p.decided_type = decide_table_type(p.leaderboard_prob, p.ablation_prob, threshold);
  return p;
}

TableTypeModel train_table_type(const std::vector<std::pair<RawTable, TableType>>& gold,
                                const TrainConfig& config) {
  std::vector<LabeledExample> base;
  std::vector<TableType> types;
  for (const auto& [table, type] : gold) {
    base.push_back(table_example(table));
    types.push_back(type);
  }
  auto build = [&](TableType positive) {
    std::vector<LabeledExample> examples;
    for (std::size_t i = 0; i < base.size(); ++i) {
      LabeledExample ex = base[i];
      ex.label = types[i] == positive ? kPositive : kNegative;
      examples.push_back(std::move(ex));
    }
    std::vector<std::pair<std::string, std::size_t>> keys;
    for (std::size_t i = 0; i < examples.size(); ++i) keys.emplace_back(example_key(examples[i]), i);
    std::sort(keys.begin(), keys.end());
    std::vector<LabeledExample> sorted;
    for (const auto& [_, i] : keys) sorted.push_back(examples[i]);
    TrainConfig cfg = config;
    cfg.labels = {kNegative, kPositive};
    cfg.allow_degenerate = false;
    try {
      return train(sorted, cfg);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kEmptyClass) throw;
      throw Error(ErrorCode::kEmptyClass,
                  "table-type gold needs both " + to_string(positive) + " and non-" +
                      to_string(positive) + " tables");
    }
  };
  TableTypeModel model;
  model.leaderboard = build(TableType::kLeaderboard);
  model.ablation = build(TableType::kAblation);
  return model;
}

std::string TableTypeModel::to_json() const {
  json j;
  j["format"] = "axtract-table-type";
  j["version"] = kFormatVersion;
  j["leaderboard"] = json::parse(leaderboard.to_json());
  j["ablation"] = json::parse(ablation.to_json());
  return j.dump();
}

TableTypeModel TableTypeModel::from_json(const std::string& data) {
  TableTypeModel m;
  try {
    json j = json::parse(data);
    if (j.at("format") != "axtract-table-type" || j.at("version").get<int>() != kFormatVersion) {
      throw Error(ErrorCode::kMalformedModel, "not a table-type model");
    }
    m.leaderboard = ClassifierModel::from_json(j.at("leaderboard").dump());
    m.ablation = ClassifierModel::from_json(j.at("ablation").dump());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedModel, e.what());
  }
  return m;
}

void TableTypeModel::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out << to_json() << '\n';
}

TableTypeModel TableTypeModel::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

}  // namespace axtract
