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


#include "axtract/linking.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <set>
#include <tuple>

#include "axtract/error.hpp"
#include "axtract/numeric.hpp"
#include "axtract/text.hpp"

namespace axtract {

std::string to_string(ContextKind kind) {
  switch (kind) {
    case ContextKind::kTable:
      return "table";
    case ContextKind::kCaption:
      return "caption";
    case ContextKind::kMentions:
      return "mentions";
    case ContextKind::kAbstract:
      return "abstract";
    case ContextKind::kPaper:
      return "paper";
  }
  return "paper";
}

ContextKind parse_context_kind(std::string_view name) {
  for (ContextKind k : kContextKinds) {
    if (to_string(k) == name) return k;
  }
  throw Error(ErrorCode::kInvalidConfig, "unknown context '" + std::string(name) + "'");
}

void EvidenceSet::add(EvidenceItem item) {
  auto it = std::lower_bound(items_.begin(), items_.end(), item);
  if (it != items_.end() && *it == item) return;
  items_.insert(it, std::move(item));
}

void EvidenceSet::merge(const EvidenceSet& other) {
  for (const auto& item : other.items_) add(item);
}

NoiseModel NoiseModel::defaults() {
  NoiseModel m;
  m.noise_prob = {{ContextKind::kTable, 0.1},
                  {ContextKind::kCaption, 0.2},
                  {ContextKind::kMentions, 0.3},
                  {ContextKind::kAbstract, 0.5},
                  {ContextKind::kPaper, 0.8}};
  m.entity_given_noise = {{EntityType::kTask, 1.0 / 3.0},
                          {EntityType::kDataset, 1.0 / 3.0},
                          {EntityType::kMetric, 1.0 / 3.0}};
  return m;
}

void NoiseModel::validate() const {
  for (ContextKind k : kContextKinds) {
    double p = noise(k);
    if (!(p >= 0.0 && p <= 1.0)) {
      throw Error(ErrorCode::kInvalidConfig, "noise probability for " + to_string(k) + " outside [0, 1]");
    }
  }
  double total = 0.0;
  for (EntityType t : kEntityTypes) {
    double p = entity(t);
    if (!(p >= 0.0 && p <= 1.0)) {
      throw Error(ErrorCode::kInvalidConfig, "P(" + to_string(t) + " | noise) outside [0, 1]");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw Error(ErrorCode::kInvalidConfig, "entity_given_noise must sum to 1");
  }
}

double NoiseModel::noise(ContextKind kind) const {
  auto it = noise_prob.find(kind);
  if (it == noise_prob.end()) throw Error(ErrorCode::kInvalidConfig, "no noise probability for " + to_string(kind));
  return it->second;
}

double NoiseModel::entity(EntityType type) const {
  auto it = entity_given_noise.find(type);
  if (it == entity_given_noise.end()) {
    throw Error(ErrorCode::kInvalidConfig, "no P(" + to_string(type) + " | noise)");
  }
  return it->second;
}

CellContexts generate_contexts(CellPosition cell, const SegmentedTable& seg, const PaperDocument& doc,
                               const FragmentIndex& index) {
  CellContexts ctx;
  auto wanted = [](CellLabel l) {
    return l == CellLabel::kDataset || l == CellLabel::kMetric || l == CellLabel::kPaperModel ||
           l == CellLabel::kCitedModel;
  };
  const RawTable& t = seg.table;
  for (std::size_t c = 0; c < t.cols(); ++c) {
    if (c != cell.col && wanted(seg.at(cell.row, c))) ctx.table_ctx.push_back(t.at(cell.row, c).content);
  }
  for (std::size_t r = 0; r < t.rows(); ++r) {
    if (r != cell.row && wanted(seg.at(r, cell.col))) ctx.table_ctx.push_back(t.at(r, cell.col).content);
  }
  ctx.caption_ctx = t.caption;
  for (const auto& f : find_table_mentions(index, t, std::numeric_limits<std::size_t>::max())) {
    ctx.mentions_ctx.push_back(f.text);
  }
  ctx.abstract_ctx = doc.abstract;
  ctx.paper_ctx = doc.full_text();
  return ctx;
}

void gather_context_evidence(ContextKind kind, std::string_view text_in, const Taxonomy& taxonomy,
                             EvidenceSet& out) {
  if (text_in.empty()) return;
  std::string lower = text::to_lower(text_in);
  for (EntityType type : kEntityTypes) {
    for (const auto& [mention, entities] : taxonomy.mention_index(type)) {
      if (!text::contains_word(lower, mention)) continue;
      for (const auto& e : entities) out.add({mention, type, e, kind});
    }
  }
}

EvidenceSet gather_evidence(const CellContexts& ctx, const Taxonomy& taxonomy) {
  EvidenceSet out;
  for (const auto& cell : ctx.table_ctx) gather_context_evidence(ContextKind::kTable, cell, taxonomy, out);
  gather_context_evidence(ContextKind::kCaption, ctx.caption_ctx, taxonomy, out);
  for (const auto& f : ctx.mentions_ctx) gather_context_evidence(ContextKind::kMentions, f, taxonomy, out);
  gather_context_evidence(ContextKind::kAbstract, ctx.abstract_ctx, taxonomy, out);
  gather_context_evidence(ContextKind::kPaper, ctx.paper_ctx, taxonomy, out);
  return out;
}

std::vector<LeaderboardScore> score_leaderboards(const EvidenceSet& evidence, const Taxonomy& taxonomy,
                                                 const NoiseModel& noise) {
  const auto& lbs = taxonomy.leaderboards();
  std::set<std::tuple<std::string, EntityType, ContextKind>> observations;
  for (const auto& item : evidence.items()) observations.emplace(item.mention, item.entity_type, item.context);

  const double kNegInf = -std::numeric_limits<double>::infinity();
  std::vector<double> log_scores(lbs.size(), 0.0);
  for (std::size_t k = 0; k < lbs.size(); ++k) {
    double ls = 0.0;
    for (const auto& [mention, type, context] : observations) {
      const std::string& entity = lbs[k].entity(type);
      double p_mention = taxonomy.sharers(type, mention).contains(entity)
                             ? taxonomy.mention_probability(type, mention, entity)
                             : 0.0;
      double pn = noise.noise(context);
      double factor = pn * noise.entity(type) + (1.0 - pn) * p_mention;
      if (factor <= 0.0) {
        ls = kNegInf;
        break;
      }
      ls += std::log(factor);
    }
    log_scores[k] = ls;
  }
  double max_ls = kNegInf;
  for (double ls : log_scores) max_ls = std::max(max_ls, ls);

  std::vector<LeaderboardScore> out(lbs.size());
  if (max_ls == kNegInf) {
    for (std::size_t k = 0; k < lbs.size(); ++k) out[k] = {k, 1.0 / static_cast<double>(lbs.size())};
  } else {
    double z = 0.0;
    for (double ls : log_scores) z += std::exp(ls - max_ls);
    for (std::size_t k = 0; k < lbs.size(); ++k) out[k] = {k, std::exp(log_scores[k] - max_ls) / z};
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const LeaderboardScore& a, const LeaderboardScore& b) { return a.posterior > b.posterior; });
  return out;
}

double normalize_metric_value(std::string_view raw, const Leaderboard& leaderboard, Diagnostics* diagnostics) {
  auto parsed = parse_numeric(raw);
  if (!parsed) throw Error(ErrorCode::kNotNumeric, "not a numeric value: '" + std::string(raw) + "'");
  if (parsed->multiple && diagnostics) {
    diagnostics->add("MultipleNumbers", "took the first number of '" + std::string(raw) + "'");
  }
  double v = parsed->value;
  if (leaderboard.metric_range_hint == RangeHint::kFraction && v > 1.0 && v <= 100.0) return v / 100.0;
  if (leaderboard.metric_range_hint == RangeHint::kPercent && v > 0.0 && v <= 1.0) return v * 100.0;
  return v;
}

std::optional<ModelAttribution> attribute_model(const SegmentedTable& seg, CellPosition cell) {
  auto is_model = [](CellLabel l) { return l == CellLabel::kPaperModel || l == CellLabel::kCitedModel; };
  const RawTable& t = seg.table;
  std::optional<ModelAttribution> best;
  std::size_t best_dist = 0;
  for (std::size_t c = 0; c < t.cols(); ++c) {
    if (c == cell.col || !is_model(seg.at(cell.row, c))) continue;
    std::size_t d = c < cell.col ? cell.col - c : c - cell.col;
    if (!best || d < best_dist) {
      best = ModelAttribution{t.at(cell.row, c).content, seg.at(cell.row, c), {cell.row, c}};
      best_dist = d;
    }
  }
  if (best) return best;
  for (std::size_t r = 0; r < t.rows(); ++r) {
    if (r == cell.row || !is_model(seg.at(r, cell.col))) continue;
    std::size_t d = r < cell.row ? cell.row - r : r - cell.row;
    if (!best || d < best_dist) {
      best = ModelAttribution{t.at(r, cell.col).content, seg.at(r, cell.col), {r, cell.col}};
      best_dist = d;
    }
  }
  return best;
}

Linker::Linker(const PaperDocument& doc, const FragmentIndex& index, const Taxonomy& taxonomy,
               const NoiseModel& noise)
    : doc_(doc), index_(index), taxonomy_(taxonomy), noise_(noise) {
  gather_context_evidence(ContextKind::kAbstract, doc_.abstract, taxonomy_, document_evidence_);
  gather_context_evidence(ContextKind::kPaper, doc_.full_text(), taxonomy_, document_evidence_);
}

CellContexts Linker::contexts(const SegmentedTable& seg, CellPosition cell) const {
  return generate_contexts(cell, seg, doc_, index_);
}

const EvidenceSet& Linker::table_evidence(const SegmentedTable& seg) const {
  std::lock_guard lock(mutex_);
  auto it = table_cache_.find(seg.table.table_id);
  if (it != table_cache_.end()) return it->second;
  EvidenceSet ev = document_evidence_;
  gather_context_evidence(ContextKind::kCaption, seg.table.caption, taxonomy_, ev);
  for (const auto& f : find_table_mentions(index_, seg.table, std::numeric_limits<std::size_t>::max())) {
    gather_context_evidence(ContextKind::kMentions, f.text, taxonomy_, ev);
  }
  return table_cache_.emplace(seg.table.table_id, std::move(ev)).first->second;
}

EvidenceSet Linker::evidence(const SegmentedTable& seg, CellPosition cell) const {
  EvidenceSet ev = table_evidence(seg);
  auto wanted = [](CellLabel l) {
    return l == CellLabel::kDataset || l == CellLabel::kMetric || l == CellLabel::kPaperModel ||
           l == CellLabel::kCitedModel;
  };
  const RawTable& t = seg.table;
  for (std::size_t c = 0; c < t.cols(); ++c) {
    if (c != cell.col && wanted(seg.at(cell.row, c))) {
      gather_context_evidence(ContextKind::kTable, t.at(cell.row, c).content, taxonomy_, ev);
    }
  }
  for (std::size_t r = 0; r < t.rows(); ++r) {
    if (r != cell.row && wanted(seg.at(r, cell.col))) {
      gather_context_evidence(ContextKind::kTable, t.at(r, cell.col).content, taxonomy_, ev);
    }
  }
  return ev;
}

std::vector<ScoredCandidate> Linker::candidates(const SegmentedTable& seg, CellPosition cell,
                                                Diagnostics* diagnostics) const {
  const std::string& raw = seg.table.at(cell.row, cell.col).content;
  if (!is_numeric(raw)) throw Error(ErrorCode::kNotNumeric, "not a numeric value: '" + raw + "'");
  auto scores = score_leaderboards(evidence(seg, cell), taxonomy_, noise_);
  auto model = attribute_model(seg, cell);
  std::vector<ScoredCandidate> out;
  bool reported = false;
  for (const auto& s : scores) {
    const Leaderboard& lb = taxonomy_.leaderboards()[s.leaderboard];
    ScoredCandidate c;
    c.paper_id = doc_.paper_id;
    c.leaderboard_id = lb.leaderboard_id;
    c.task = lb.task;
    c.dataset = lb.dataset;
    c.metric = lb.metric;
    c.posterior = s.posterior;
    c.table_id = seg.table.table_id;
    c.row = cell.row;
    c.col = cell.col;
    c.raw_value = raw;
    c.normalized_value = normalize_metric_value(raw, lb, reported ? nullptr : diagnostics);
    reported = true;
    c.model = model;
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace axtract
