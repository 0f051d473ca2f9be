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

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "axtract/filtering.hpp"
#include "axtract/linking.hpp"
#include "axtract/segmentation.hpp"
#include "axtract/taxonomy.hpp"

namespace axtract {

struct GoldRecord {
  std::string paper_id;
  std::string task;
  std::string dataset;
  std::string metric;
  double value = 0.0;
  std::optional<std::string> table_id;
  std::optional<std::size_t> row;
  std::optional<std::size_t> col;
  // Some entity did not resolve against the taxonomy.
  bool unknown_entity = false;
};

// Gold JSON: an array, or {"records": [...]}, of
// {paper_id, task, dataset, metric, value, table_id?, row?, col?}.
// Entities are canonicalized case-insensitively against the taxonomy; names
// that do not resolve are kept verbatim and flagged. Throws Error{kMalformedGold}.
std::vector<GoldRecord> parse_gold(std::string_view json, const Taxonomy& taxonomy);
std::vector<GoldRecord> load_gold(const std::filesystem::path& path, const Taxonomy& taxonomy);

enum class Granularity { kTdms, kTdm, kTask, kDataset, kMetric };
std::string to_string(Granularity g);
// Throws Error{kUnknownGranularity}.
Granularity parse_granularity(std::string_view name);

enum class MacroAxis { kPaper, kLeaderboard };
// Throws Error{kInvalidConfig}.
MacroAxis parse_macro_axis(std::string_view name);

inline constexpr double kValueTolerance = 1e-6;

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// 0 for an empty denominator; F1 is the harmonic mean of the given P and R.
Prf make_prf(double precision, double recall);
Prf prf_from_counts(std::size_t true_positives, std::size_t predicted, std::size_t gold);

struct GroupScore {
  std::string key;
  std::size_t true_positives = 0;
  std::size_t predicted = 0;
  std::size_t gold = 0;
  Prf scores;
};

struct EvalReport {
  Granularity granularity = Granularity::kTdms;
  MacroAxis macro_axis = MacroAxis::kPaper;
  Prf micro;
  // Macro P and R are averaged over groups with at least one gold item;
  // macro F1 is their harmonic mean.
  Prf macro;
  std::vector<GroupScore> per_paper;
  std::vector<GroupScore> per_group;  // the macro axis groups
};

// Items are compared per paper as sets; values match within kValueTolerance.
EvalReport evaluate_records(const std::vector<ResultRecord>& pred, const std::vector<GoldRecord>& gold,
                            Granularity granularity, MacroAxis axis = MacroAxis::kPaper);

std::string report_to_json(const std::vector<EvalReport>& reports);
// Aligned text table with P, R and F1 columns for micro and macro averaging.
std::string report_to_text(const std::vector<EvalReport>& reports);

struct TopKAccuracy {
  std::size_t k = 0;
  std::size_t cells = 0;
  double leaderboard = 0.0;
  double task = 0.0;
  double dataset = 0.0;
  double metric = 0.0;
};

// Runs the linker on gold-segmented tables and counts linked cells whose gold
// leaderboard (or gold entity) appears among the top k candidates.
TopKAccuracy topk_linking_accuracy(const GoldCorpus& corpus, const Taxonomy& taxonomy,
                                   const NoiseModel& noise, std::size_t k);

}  // namespace axtract
