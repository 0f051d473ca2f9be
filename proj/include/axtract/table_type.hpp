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
#include <utility>
#include <vector>

#include "axtract/classifier.hpp"
#include "axtract/source.hpp"

namespace axtract {

enum class TableType { kLeaderboard, kAblation, kIrrelevant };
std::string to_string(TableType type);
// Throws Error{kMalformedGold} on unknown names.
TableType parse_table_type(std::string_view name);

struct TableTypePrediction {
  double leaderboard_prob = 0.0;
  double ablation_prob = 0.0;
  TableType decided_type = TableType::kIrrelevant;
};

// Scores at or above the threshold are positive; the larger positive score
// wins and a tie goes to leaderboard.
TableType decide_table_type(double leaderboard_prob, double ablation_prob, double threshold);

// Two one-vs-rest classifiers, one per label, so both scores are independent.
struct TableTypeModel {
  static constexpr int kFormatVersion = 1;
  ClassifierModel leaderboard;
  ClassifierModel ablation;

  std::string to_json() const;
  static TableTypeModel from_json(const std::string& json);
  void save(const std::string& path) const;
  static TableTypeModel load(const std::string& path);
};

// Caption plus the flattened cell text.
LabeledExample table_example(const RawTable& table);

TableTypePrediction classify_table_type(const RawTable& table, const TableTypeModel& model,
                                        double threshold = 0.5);

// Examples are sorted canonically before training, so the gold order does
// not matter. Throws Error{kEmptyClass} unless gold has both leaderboard and
// ablation tables and each binary model sees a negative example.
TableTypeModel train_table_type(const std::vector<std::pair<RawTable, TableType>>& gold,
                                const TrainConfig& config = {});

}  // namespace axtract
