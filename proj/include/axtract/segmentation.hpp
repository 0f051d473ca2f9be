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
#include <string>
#include <string_view>
#include <vector>

#include "axtract/classifier.hpp"
#include "axtract/source.hpp"
#include "axtract/table_type.hpp"
#include "axtract/text_index.hpp"

namespace axtract {

// The five segmentation classes plus the numeric marker.
enum class CellLabel { kDataset, kMetric, kPaperModel, kCitedModel, kOther, kNumeric };
inline constexpr CellLabel kSegmentationClasses[] = {CellLabel::kDataset, CellLabel::kMetric,
                                                     CellLabel::kPaperModel, CellLabel::kCitedModel,
                                                     CellLabel::kOther};

std::string to_string(CellLabel label);
// Accepts the five class names, "numeric", and the gold-only "task" and
// "meta", which map to other. Throws Error{kMalformedGold}.
CellLabel parse_cell_label(std::string_view name);

struct SegmentedTable {
  RawTable table;
  std::vector<std::vector<CellLabel>> classes;
  TableTypePrediction type;

  CellLabel at(std::size_t r, std::size_t c) const { return classes.at(r).at(c); }
};

inline constexpr const char* kMaskToken = "<MASK>";
inline constexpr std::size_t kDefaultEvidenceDepth = 10;

// Top-k BM25 fragments for the cell content, with every case-insensitive
// occurrence of the content replaced by <MASK>.
std::vector<std::string> retrieve_cell_evidence(const Cell& cell, const FragmentIndex& index,
                                                std::size_t k = kDefaultEvidenceDepth);

LabeledExample cell_example(const RawTable& table, std::size_t row, std::size_t col,
                            const FragmentIndex& index, std::size_t k);

// Empty cells are other, numeric cells are marked numeric, everything else
// gets the classifier's argmax.
SegmentedTable segment_table(const RawTable& table, const ClassifierModel& model,
                             const FragmentIndex& index, std::size_t k = kDefaultEvidenceDepth);

struct GoldLink {
  std::size_t row = 0;
  std::size_t col = 0;
  std::string task;
  std::string dataset;
  std::string metric;
};

struct GoldTable {
  std::string paper_id;
  std::string table_id;
  TableType type = TableType::kIrrelevant;
  // Cell text as annotated; checked against the extraction when present.
  std::vector<std::vector<std::string>> cells;
  // Per-cell labels, empty when the table carries no segmentation.
  std::vector<std::vector<CellLabel>> labels;
  std::vector<GoldLink> links;
};

// Gold segmentation file:
// {"version": 1,
//  "papers": {"<paper_id>": "<source path relative to this file>"},
//  "tables": [{"paper_id", "table_id", "type", "cells": [[text]],
//              "labels": [[class]], "links": [{row, col, task, dataset, metric}]}]}
struct GoldSegmentation {
  std::map<std::string, std::filesystem::path> papers;
  std::vector<GoldTable> tables;
};

GoldSegmentation parse_gold_segmentation(std::string_view json, const std::filesystem::path& base_dir);
GoldSegmentation load_gold_segmentation(const std::filesystem::path& path);

// A gold table paired with the extracted table it annotates.
struct GoldTableView {
  const GoldTable* gold = nullptr;
  const RawTable* table = nullptr;
  const PaperDocument* document = nullptr;
  const FragmentIndex* index = nullptr;
};

// Ingested papers of a gold file, indexed once. Throws Error{kMalformedGold}
// when a gold table is missing from its paper or its cell text disagrees with
// the extraction.
class GoldCorpus {
 public:
  GoldCorpus(const GoldSegmentation& gold, const IngestOptions& ingest = {}, Bm25Params bm25 = {});

  const std::vector<GoldTableView>& views() const { return views_; }
  const std::map<std::string, PaperDocument>& documents() const { return documents_; }
  const GoldSegmentation& gold() const { return gold_; }
  const FragmentIndex& index(const std::string& paper_id) const { return indexes_.at(paper_id); }

 private:
  GoldSegmentation gold_;
  std::map<std::string, PaperDocument> documents_;
  std::map<std::string, FragmentIndex> indexes_;
  std::vector<GoldTableView> views_;
};

// Trains on every non-empty, non-numeric gold cell. Examples are sorted
// canonically first, so table order does not change the model.
// Throws Error{kEmptyClass} when one of the five classes has no examples.
ClassifierModel train_segmenter(const GoldCorpus& corpus, std::size_t k = kDefaultEvidenceDepth,
                                const TrainConfig& config = {});

// Segmented table built from gold labels (numeric cells re-derived by the
// numeric rule).
SegmentedTable gold_segmented_table(const GoldTableView& view);

}  // namespace axtract
