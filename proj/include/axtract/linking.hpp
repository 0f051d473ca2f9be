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

#include <compare>
#include <cstddef>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "axtract/diagnostics.hpp"
#include "axtract/segmentation.hpp"
#include "axtract/taxonomy.hpp"
#include "axtract/text_index.hpp"

namespace axtract {

enum class ContextKind { kTable, kCaption, kMentions, kAbstract, kPaper };
inline constexpr ContextKind kContextKinds[] = {ContextKind::kTable, ContextKind::kCaption,
                                                ContextKind::kMentions, ContextKind::kAbstract,
                                                ContextKind::kPaper};
std::string to_string(ContextKind kind);
// Throws Error{kInvalidConfig}.
ContextKind parse_context_kind(std::string_view name);

struct CellContexts {
  // Contents of dataset, metric and model cells in the cell's row and column.
  std::vector<std::string> table_ctx;
  std::string caption_ctx;
  std::vector<std::string> mentions_ctx;
  std::string abstract_ctx;
  std::string paper_ctx;
};

struct EvidenceItem {
  std::string mention;
  EntityType entity_type = EntityType::kTask;
  std::string entity;
  ContextKind context = ContextKind::kTable;

  friend auto operator<=>(const EvidenceItem&, const EvidenceItem&) = default;
};

// Items deduplicated on (mention, entity, context), kept sorted.
class EvidenceSet {
 public:
  void add(EvidenceItem item);
  void merge(const EvidenceSet& other);
  const std::vector<EvidenceItem>& items() const { return items_; }
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }

 private:
  std::vector<EvidenceItem> items_;
};

struct NoiseModel {
  std::map<ContextKind, double> noise_prob;
  std::map<EntityType, double> entity_given_noise;

  static NoiseModel defaults();
  // Throws Error{kInvalidConfig} on probabilities outside [0, 1] or an
  // entity_given_noise that does not sum to 1.
  void validate() const;
  double noise(ContextKind kind) const;
  double entity(EntityType type) const;
};

CellContexts generate_contexts(CellPosition cell, const SegmentedTable& seg, const PaperDocument& doc,
                               const FragmentIndex& index);

// Every registered mention found on token boundaries, case-insensitively.
void gather_context_evidence(ContextKind kind, std::string_view text, const Taxonomy& taxonomy,
                             EvidenceSet& out);
EvidenceSet gather_evidence(const CellContexts& ctx, const Taxonomy& taxonomy);

struct LeaderboardScore {
  std::size_t leaderboard = 0;  // index into taxonomy.leaderboards()
  double posterior = 0.0;
};

// Naive Bayes over evidence with a per-item noise mixture:
//   P(y_k | E) ∝ P(y_k) · Π_j [ P(noise | ctx_j) · P(type_j | noise)
//                              + (1 − P(noise | ctx_j)) · P(m_j | f_k) ]
// where f_k is y_k's entity of type_j and P(m_j | f_k) is the normalized
// mention weight, 0 when m_j is not evidence for f_k. Items that differ only
// in the matched entity are one observation of the mention. The prior is
// uniform and products are summed in log space. If every leaderboard scores
// zero the posterior is uniform. Sorted by posterior, then taxonomy order.
std::vector<LeaderboardScore> score_leaderboards(const EvidenceSet& evidence, const Taxonomy& taxonomy,
                                                 const NoiseModel& noise);

// Applies the numeric rule, then rescales by the leaderboard's range hint:
// fraction and 1 < v <= 100 divides by 100, percent and 0 < v <= 1
// multiplies by 100. Throws Error{kNotNumeric}.
double normalize_metric_value(std::string_view raw, const Leaderboard& leaderboard,
                              Diagnostics* diagnostics = nullptr);

struct ModelAttribution {
  std::string name;
  CellLabel label = CellLabel::kPaperModel;
  CellPosition position;
};

// Nearest paper_model or cited_model cell in the row, else in the column.
// Ties go to the left / upper cell.
std::optional<ModelAttribution> attribute_model(const SegmentedTable& seg, CellPosition cell);

struct ScoredCandidate {
  std::string paper_id;
  std::string leaderboard_id;
  std::string task;
  std::string dataset;
  std::string metric;
  double posterior = 0.0;
  std::string table_id;
  std::size_t row = 0;
  std::size_t col = 0;
  std::string raw_value;
  double normalized_value = 0.0;
  std::optional<ModelAttribution> model;
};

// Links numeric cells of one paper. Evidence from the abstract and the full
// text is gathered once; caption and table-mention evidence once per table.
class Linker {
 public:
  Linker(const PaperDocument& doc, const FragmentIndex& index, const Taxonomy& taxonomy,
         const NoiseModel& noise);

  CellContexts contexts(const SegmentedTable& seg, CellPosition cell) const;
  EvidenceSet evidence(const SegmentedTable& seg, CellPosition cell) const;
  // All leaderboards, best first. Throws Error{kNotNumeric} for a cell the
  // numeric rule rejects.
  std::vector<ScoredCandidate> candidates(const SegmentedTable& seg, CellPosition cell,
                                          Diagnostics* diagnostics = nullptr) const;

 private:
  const EvidenceSet& table_evidence(const SegmentedTable& seg) const;

  const PaperDocument& doc_;
  const FragmentIndex& index_;
  const Taxonomy& taxonomy_;
  const NoiseModel& noise_;
  EvidenceSet document_evidence_;
  mutable std::mutex mutex_;
  mutable std::map<std::string, EvidenceSet> table_cache_;
};

}  // namespace axtract
