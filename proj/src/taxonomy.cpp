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


#include "axtract/taxonomy.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "axtract/error.hpp"
#include "axtract/text.hpp"
#include "json.hpp"

namespace axtract {

using nlohmann::json;

namespace {

const std::set<std::string> kEmptySet;

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string strip_punctuation(std::string_view word) {
  std::size_t b = 0;
  std::size_t e = word.size();
  while (b < e && !text::is_word_char(word[b])) ++b;
  while (e > b && !text::is_word_char(word[e - 1])) --e;
  return std::string(word.substr(b, e - b));
}

}  // namespace

std::string to_string(EntityType type) {
  switch (type) {
    case EntityType::kTask:
      return "task";
    case EntityType::kDataset:
      return "dataset";
    case EntityType::kMetric:
      return "metric";
  }
  return "unknown";
}

EntityType parse_entity_type(std::string_view name) {
  std::string n = text::to_lower(name);
  if (n == "task") return EntityType::kTask;
  if (n == "dataset") return EntityType::kDataset;
  if (n == "metric") return EntityType::kMetric;
  throw Error(ErrorCode::kMalformedTaxonomy, "unknown entity type '" + std::string(name) + "'");
}

std::string to_string(RangeHint hint) {
  switch (hint) {
    case RangeHint::kPercent:
      return "percent";
    case RangeHint::kFraction:
      return "fraction";
    case RangeHint::kAbsolute:
      return "absolute";
  }
  return "absolute";
}

std::string to_string(EvidenceStrategy strategy) {
  switch (strategy) {
    case EvidenceStrategy::kBagOfWords:
      return "bow";
    case EvidenceStrategy::kAbbreviations:
      return "abbreviations";
    case EvidenceStrategy::kCurated:
      return "curated";
    case EvidenceStrategy::kCombined:
      return "combined";
  }
  return "bow";
}

EvidenceStrategy parse_strategy(std::string_view name) {
  std::string n = text::to_lower(name);
  if (n == "bow" || n == "bag-of-words") return EvidenceStrategy::kBagOfWords;
  if (n == "abbreviations") return EvidenceStrategy::kAbbreviations;
  if (n == "curated") return EvidenceStrategy::kCurated;
  if (n == "combined") return EvidenceStrategy::kCombined;
  throw Error(ErrorCode::kInvalidConfig, "unknown evidence strategy '" + std::string(name) + "'");
}

const std::string& Leaderboard::entity(EntityType type) const {
  switch (type) {
    case EntityType::kTask:
      return task;
    case EntityType::kDataset:
      return dataset;
    case EntityType::kMetric:
      return metric;
  }
  return task;
}

std::string make_leaderboard_id(const std::string& task, const std::string& dataset,
                                const std::string& metric) {
  return task + " | " + dataset + " | " + metric;
}

Taxonomy::Taxonomy(std::vector<Leaderboard> leaderboards) : leaderboards_(std::move(leaderboards)) {
  std::set<std::tuple<std::string, std::string, std::string>> triples;
  for (std::size_t i = 0; i < leaderboards_.size(); ++i) {
    auto& lb = leaderboards_[i];
    if (lb.task.empty() || lb.dataset.empty() || lb.metric.empty()) {
      throw Error(ErrorCode::kMalformedTaxonomy, "leaderboard with an empty entity name");
    }
    if (lb.leaderboard_id.empty()) lb.leaderboard_id = make_leaderboard_id(lb.task, lb.dataset, lb.metric);
    if (!triples.emplace(lb.task, lb.dataset, lb.metric).second) {
      throw Error(ErrorCode::kDuplicateLeaderboard,
                  "duplicate leaderboard (" + lb.task + ", " + lb.dataset + ", " + lb.metric + ")");
    }
    if (!by_id_.emplace(lb.leaderboard_id, i).second) {
      throw Error(ErrorCode::kDuplicateLeaderboard, "duplicate leaderboard id " + lb.leaderboard_id);
    }
    for (EntityType t : kEntityTypes) entities_[t].insert(lb.entity(t));
  }
  for (EntityType t : kEntityTypes) {
    for (const auto& e : entities_[t]) add_evidence(t, e, e);
  }
}

const Leaderboard* Taxonomy::find(std::string_view id) const {
  auto i = index_of(id);
  return i ? &leaderboards_[*i] : nullptr;
}

std::optional<std::size_t> Taxonomy::index_of(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

const std::set<std::string>& Taxonomy::entities(EntityType type) const {
  auto it = entities_.find(type);
  return it == entities_.end() ? kEmptySet : it->second;
}

std::optional<std::string> Taxonomy::canonical(EntityType type, std::string_view name) const {
  std::string lower = text::to_lower(text::trim(name));
  for (const auto& e : entities(type)) {
    if (text::to_lower(e) == lower) return e;
  }
  return std::nullopt;
}

const std::set<std::string>& Taxonomy::evidence(EntityType type, const std::string& entity) const {
  auto t = evidence_.find(type);
  if (t == evidence_.end()) return kEmptySet;
  auto e = t->second.find(entity);
  return e == t->second.end() ? kEmptySet : e->second;
}

const std::set<std::string>& Taxonomy::sharers(EntityType type, const std::string& mention) const {
  auto t = sharers_.find(type);
  if (t == sharers_.end()) return kEmptySet;
  auto m = t->second.find(mention);
  return m == t->second.end() ? kEmptySet : m->second;
}

const std::map<std::string, std::set<std::string>>& Taxonomy::mention_index(EntityType type) const {
  static const std::map<std::string, std::set<std::string>> kEmpty;
  auto t = sharers_.find(type);
  return t == sharers_.end() ? kEmpty : t->second;
}

void Taxonomy::add_evidence(EntityType type, const std::string& entity, std::string mention) {
  mention = text::squash_whitespace(text::to_lower(mention));
  if (mention.empty()) return;
  if (!entities(type).contains(entity)) {
    throw Error(ErrorCode::kMalformedTaxonomy, "unknown " + to_string(type) + " '" + entity + "'");
  }
  evidence_[type][entity].insert(mention);
  sharers_[type][mention].insert(entity);
}

double Taxonomy::raw_mention_weight(EntityType type, const std::string& mention,
                                    const std::string& entity) const {
  const auto& who = sharers(type, mention);
  if (!who.contains(entity)) {
    throw Error(ErrorCode::kNotEvidence,
                "'" + mention + "' is not evidence for " + to_string(type) + " '" + entity + "'");
  }
  return 1.0 / static_cast<double>(who.size());
}

double Taxonomy::mention_probability(EntityType type, const std::string& mention,
                                     const std::string& entity) const {
  double raw = raw_mention_weight(type, mention, entity);
  double total = 0.0;
  for (const auto& m : evidence(type, entity)) {
    total += 1.0 / static_cast<double>(sharers(type, m).size());
  }
  return raw / total;
}

std::set<std::string> bag_of_words(EntityType type, std::string_view name) {
  std::set<std::string> out;
  std::string lower = text::squash_whitespace(text::to_lower(name));
  if (lower.empty()) return out;
  out.insert(lower);
  if (type == EntityType::kTask) return out;
  for (const auto& w : text::split(lower, ' ')) {
    std::string word = strip_punctuation(w);
    if (!word.empty() && !text::is_stop_word(word)) out.insert(word);
  }
  return out;
}

Taxonomy generate_evidences(const Taxonomy& taxonomy, EvidenceStrategy strategy,
                            const EvidenceExtras& extras) {
  bool want_abbrev = strategy == EvidenceStrategy::kAbbreviations ||
                     strategy == EvidenceStrategy::kCombined;
  bool want_curated = strategy == EvidenceStrategy::kCurated ||
                      strategy == EvidenceStrategy::kCombined;
  if (want_abbrev && !extras.abbreviations) {
    throw Error(ErrorCode::kMissingExtras, "strategy '" + to_string(strategy) + "' needs abbreviation pairs");
  }
  if (want_curated && !extras.curated) {
    throw Error(ErrorCode::kMissingExtras, "strategy '" + to_string(strategy) + "' needs curated mentions");
  }
  Taxonomy out(taxonomy.leaderboards());
  for (EntityType t : kEntityTypes) {
    for (const auto& e : out.entities(t)) {
      for (const auto& m : bag_of_words(t, e)) out.add_evidence(t, e, m);
    }
  }
  if (want_curated) {
    for (const auto& c : *extras.curated) {
      auto name = out.canonical(c.entity_type, c.entity_name);
      if (!name) continue;
      for (const auto& m : c.mentions) out.add_evidence(c.entity_type, *name, m);
    }
  }
  if (want_abbrev) {
    for (const auto& pair : *extras.abbreviations) {
      std::string long_lower = text::squash_whitespace(text::to_lower(pair.long_form));
      if (long_lower.empty() || pair.short_form.empty()) continue;
      for (EntityType t : kEntityTypes) {
        for (const auto& e : out.entities(t)) {
          if (text::contains_word(text::to_lower(e), long_lower)) out.add_evidence(t, e, pair.short_form);
        }
      }
    }
  }
  return out;
}

Taxonomy parse_taxonomy(std::string_view data) {
  std::vector<Leaderboard> lbs;
  try {
    json j = json::parse(data);
    const json& list = j.is_object() ? j.at("leaderboards") : j;
    if (!list.is_array()) throw Error(ErrorCode::kMalformedTaxonomy, "expected an array of leaderboards");
    for (const auto& item : list) {
      Leaderboard lb;
      lb.task = text::trim(item.at("task").get<std::string>());
      lb.dataset = text::trim(item.at("dataset").get<std::string>());
      lb.metric = text::trim(item.at("metric").get<std::string>());
      lb.higher_is_better = item.value("higher_is_better", true);
      if (item.contains("id")) lb.leaderboard_id = item.at("id").get<std::string>();
      if (item.contains("range_hint") && !item.at("range_hint").is_null()) {
        std::string h = item.at("range_hint").get<std::string>();
        if (h == "percent") {
          lb.metric_range_hint = RangeHint::kPercent;
        } else if (h == "fraction") {
          lb.metric_range_hint = RangeHint::kFraction;
        } else if (h == "absolute") {
          lb.metric_range_hint = RangeHint::kAbsolute;
        } else {
          throw Error(ErrorCode::kMalformedTaxonomy, "unknown range_hint '" + h + "'");
        }
      }
      lbs.push_back(std::move(lb));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedTaxonomy, e.what());
  }
  return generate_evidences(Taxonomy(std::move(lbs)), EvidenceStrategy::kBagOfWords);
}

Taxonomy load_taxonomy(const std::filesystem::path& path) { return parse_taxonomy(read_text(path)); }

std::vector<CuratedMentions> parse_curated(std::string_view data) {
  std::vector<CuratedMentions> out;
  try {
    json j = json::parse(data);
    if (!j.is_array()) throw Error(ErrorCode::kMalformedTaxonomy, "curated mentions must be an array");
    for (const auto& item : j) {
      CuratedMentions c;
      c.entity_type = parse_entity_type(item.at("entity_type").get<std::string>());
      c.entity_name = item.at("entity_name").get<std::string>();
      c.mentions = item.at("mentions").get<std::vector<std::string>>();
      out.push_back(std::move(c));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedTaxonomy, e.what());
  }
  return out;
}

std::vector<CuratedMentions> load_curated(const std::filesystem::path& path) {
  return parse_curated(read_text(path));
}

std::vector<AbbreviationPair> parse_abbreviations_tsv(std::string_view tsv) {
  std::vector<AbbreviationPair> out;
  for (auto line : text::split(tsv, '\n')) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty() || line.starts_with("#")) continue;
    auto cols = text::split(line, '\t');
    if (cols.size() < 2) throw Error(ErrorCode::kInvalidConfig, "abbreviation line without a tab: " + line);
    AbbreviationPair p{text::trim(cols[0]), text::trim(cols[1]), 1};
    if (cols.size() > 2 && !text::trim(cols[2]).empty()) p.count = std::stoul(cols[2]);
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<AbbreviationPair> load_abbreviations(const std::filesystem::path& path) {
  return parse_abbreviations_tsv(read_text(path));
}

std::string abbreviations_to_tsv(const std::vector<AbbreviationPair>& pairs) {
  std::string out;
  for (const auto& p : pairs) {
    out += p.short_form + "\t" + p.long_form + "\t" + std::to_string(p.count) + "\n";
  }
  return out;
}

}  // namespace axtract
