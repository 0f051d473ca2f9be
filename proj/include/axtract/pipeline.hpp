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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "axtract/classifier.hpp"
#include "axtract/diagnostics.hpp"
#include "axtract/filtering.hpp"
#include "axtract/linking.hpp"
#include "axtract/segmentation.hpp"
#include "axtract/table_type.hpp"
#include "axtract/taxonomy.hpp"
#include "axtract/text_index.hpp"

namespace axtract {

// Main config file. Relative paths resolve against the config file's
// directory.
//
// {"taxonomy": "taxonomy.json",
//  "evidence": {"strategy": "combined", "curated": "curated.json",
//               "abbreviations": "abbreviations.tsv"},
//  "models": {"table_type": "table_type.json", "segmenter": "segmenter.json"},
//  "thresholds": {"t1": 0.1, "t2": 0.5, "table_type": 0.5},
//  "noise": {"noise_prob": {"table": 0.1, ...},
//            "entity_given_noise": {"task": 0.333, ...}},
//  "bm25": {"k1": 1.2, "b": 0.75},
//  "evidence_depth": 10,
//  "fragments": {"max_tokens": 300, "max_sentences": 2},
//  "macros": {"name": {"args": 0, "body": "..."}}}
struct PipelineConfig {
  std::filesystem::path taxonomy;
  EvidenceStrategy strategy = EvidenceStrategy::kBagOfWords;
  std::optional<std::filesystem::path> curated;
  std::optional<std::filesystem::path> abbreviations;
  std::optional<std::filesystem::path> table_type_model;
  std::optional<std::filesystem::path> segmenter_model;
  FilterThresholds thresholds;
  double table_type_threshold = 0.5;
  NoiseModel noise = NoiseModel::defaults();
  Bm25Params bm25;
  std::size_t evidence_depth = kDefaultEvidenceDepth;
  FragmentOptions fragments;
  IngestOptions ingest;
};

// Throws Error{kInvalidConfig} on bad values or missing referenced files.
PipelineConfig parse_config(std::string_view json, const std::filesystem::path& base_dir);
PipelineConfig load_config(const std::filesystem::path& path);
// Checks ranges and that every referenced file exists.
void validate(const PipelineConfig& config);

struct PaperExtraction {
  PaperDocument document;
  // One entry per extracted table. Irrelevant tables only carry the numeric
  // marking; the others are segmented.
  std::vector<SegmentedTable> tables;
  // Best candidate of every numeric cell in leaderboard and ablation tables,
  // in document order.
  std::vector<ScoredCandidate> candidates;
  std::vector<ResultRecord> records;
  Diagnostics diagnostics;
  bool failed = false;
};

// Taxonomy with evidence and both classifiers, loaded once and shared by
// all papers.
class Pipeline {
 public:
  explicit Pipeline(PipelineConfig config);
  Pipeline(PipelineConfig config, Taxonomy taxonomy, TableTypeModel table_type, ClassifierModel segmenter);

  const PipelineConfig& config() const { return config_; }
  const Taxonomy& taxonomy() const { return taxonomy_; }

  // Never throws for paper-level problems: they end up as diagnostics with
  // failed = true.
  PaperExtraction extract(const PaperSource& source) const;
  PaperExtraction extract(const std::filesystem::path& source) const;

  // Every leaderboard for a numeric cell, best first. Throws Error{kNotNumeric}.
  std::vector<ScoredCandidate> cell_candidates(const PaperDocument& doc, const SegmentedTable& seg,
                                               CellPosition cell) const;

  // Runs extract over all sources with up to `jobs` workers. Output order
  // follows the input order.
  std::vector<PaperExtraction> extract_all(const std::vector<std::filesystem::path>& sources,
                                           std::size_t jobs = 1) const;

 private:
  PaperExtraction run(const PaperSource& source) const;

  PipelineConfig config_;
  Taxonomy taxonomy_;
  TableTypeModel table_type_;
  ClassifierModel segmenter_;
};

// Taxonomy with the configured evidence strategy applied.
Taxonomy load_configured_taxonomy(const PipelineConfig& config);

// Numeric marking only, for tables that skip segmentation.
SegmentedTable mark_numeric(const RawTable& table, const TableTypePrediction& type);

}  // namespace axtract
