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

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "axtract/source.hpp"

namespace axtract {

enum class EntityType { kTask, kDataset, kMetric };
inline constexpr EntityType kEntityTypes[] = {EntityType::kTask, EntityType::kDataset,
                                              EntityType::kMetric};

std::string to_string(EntityType type);
// Accepts "task", "dataset", "metric". Throws Error{kMalformedTaxonomy}.
EntityType parse_entity_type(std::string_view name);

enum class RangeHint { kPercent, kFraction, kAbsolute };
std::string to_string(RangeHint hint);

struct Leaderboard {
  std::string leaderboard_id;
  std::string task;
  std::string dataset;
  std::string metric;
  bool higher_is_better = true;
  std::optional<RangeHint> metric_range_hint;

  const std::string& entity(EntityType type) const;
};

struct AbbreviationPair {
  std::string short_form;
  std::string long_form;
  std::size_t count = 1;
};

struct CuratedMentions {
  EntityType entity_type = EntityType::kDataset;
  std::string entity_name;
  std::vector<std::string> mentions;
};

enum class EvidenceStrategy { kBagOfWords, kAbbreviations, kCurated, kCombined };
std::string to_string(EvidenceStrategy strategy);
// "bow", "abbreviations", "curated", "combined". Throws Error{kInvalidConfig}.
EvidenceStrategy parse_strategy(std::string_view name);

struct EvidenceExtras {
  std::optional<std::vector<AbbreviationPair>> abbreviations;
  std::optional<std::vector<CuratedMentions>> curated;
};

// Closed set of leaderboards plus mention evidence for every task, dataset
// and metric. Mentions are stored lowercased.
class Taxonomy {
 public:
  Taxonomy() = default;
  // Throws Error{kDuplicateLeaderboard} on a repeated (task, dataset, metric).
  explicit Taxonomy(std::vector<Leaderboard> leaderboards);

  const std::vector<Leaderboard>& leaderboards() const { return leaderboards_; }
  const Leaderboard* find(std::string_view leaderboard_id) const;
  std::optional<std::size_t> index_of(std::string_view leaderboard_id) const;

  const std::set<std::string>& entities(EntityType type) const;
  // Case-insensitive lookup of the canonical entity name.
  std::optional<std::string> canonical(EntityType type, std::string_view name) const;

  const std::set<std::string>& evidence(EntityType type, const std::string& entity) const;
  // Entities of the type that list the mention as evidence.
  const std::set<std::string>& sharers(EntityType type, const std::string& mention) const;
  // mention -> entities, for scanning contexts.
  const std::map<std::string, std::set<std::string>>& mention_index(EntityType type) const;

  void add_evidence(EntityType type, const std::string& entity, std::string mention);

  // 1 / |{g : mention is evidence for g}| within the entity type.
  // Throws Error{kNotEvidence}.
  double raw_mention_weight(EntityType type, const std::string& mention,
                            const std::string& entity) const;
  // Raw weight normalized over the entity's mentions. Throws Error{kNotEvidence}.
  double mention_probability(EntityType type, const std::string& mention,
                             const std::string& entity) const;

 private:
  std::vector<Leaderboard> leaderboards_;
  std::map<std::string, std::size_t> by_id_;
  std::map<EntityType, std::set<std::string>> entities_;
  std::map<EntityType, std::map<std::string, std::set<std::string>>> evidence_;
  std::map<EntityType, std::map<std::string, std::set<std::string>>> sharers_;
};

// Default leaderboard id when the file does not give one.
std::string make_leaderboard_id(const std::string& task, const std::string& dataset,
                                const std::string& metric);

// Taxonomy JSON: an array (or {"leaderboards": [...]}) of
// {task, dataset, metric, higher_is_better, range_hint, id?}.
// The result carries bag-of-words evidence. Throws Error{kMalformedTaxonomy}
// or Error{kDuplicateLeaderboard}.
Taxonomy parse_taxonomy(std::string_view json);
Taxonomy load_taxonomy(const std::filesystem::path& path);

// Bag-of-words mentions of an entity name: the lowercased name plus every
// whitespace-separated word that is not a stop word; tasks get the name only.
std::set<std::string> bag_of_words(EntityType type, std::string_view name);

// Rebuilds evidence for `strategy`. Throws Error{kMissingExtras} when the
// strategy needs abbreviation pairs or curated mentions that are absent.
Taxonomy generate_evidences(const Taxonomy& taxonomy, EvidenceStrategy strategy,
                            const EvidenceExtras& extras = {});

// Curated mentions JSON: array of {entity_type, entity_name, mentions[]}.
std::vector<CuratedMentions> parse_curated(std::string_view json);
std::vector<CuratedMentions> load_curated(const std::filesystem::path& path);

// Two-column TSV "short<TAB>long", optional third column with a count.
std::vector<AbbreviationPair> parse_abbreviations_tsv(std::string_view tsv);
std::vector<AbbreviationPair> load_abbreviations(const std::filesystem::path& path);
std::string abbreviations_to_tsv(const std::vector<AbbreviationPair>& pairs);

// Parenthetical definitions "long form (SF)" where the short form's
// characters align right to left with the long form, the first one at a word
// start. Pairs are deduplicated and counted, sorted by short then long form.
std::vector<AbbreviationPair> detect_abbreviations(const std::vector<PaperDocument>& corpus);
std::vector<AbbreviationPair> detect_abbreviations(std::string_view text);

}  // namespace axtract
