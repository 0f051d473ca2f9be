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


#include "axtract/filtering.hpp"

#include <algorithm>
#include <map>

#include "axtract/error.hpp"

namespace axtract {

ResultRecord to_record(const ScoredCandidate& c) {
  ResultRecord r;
  r.paper_id = c.paper_id;
  r.task = c.task;
  r.dataset = c.dataset;
  r.metric = c.metric;
  r.value = c.normalized_value;
  r.model = c.model ? c.model->name : "";
  r.leaderboard_id = c.leaderboard_id;
  r.confidence = c.posterior;
  r.table_id = c.table_id;
  r.row = c.row;
  r.col = c.col;
  return r;
}

std::vector<ResultRecord> filter_results(const std::vector<ScoredCandidate>& candidates,
                                         const Taxonomy& taxonomy, double t1, double t2) {
  if (!(t1 >= 0.0 && t1 <= 1.0 && t2 >= 0.0 && t2 <= 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "filter thresholds must lie in [0, 1]");
  }
  std::map<std::string, std::size_t> best;  // leaderboard -> candidate index
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto& c = candidates[i];
    if (!c.model || c.model->label != CellLabel::kPaperModel) continue;
    if (c.posterior < t1) continue;
    const Leaderboard* lb = taxonomy.find(c.leaderboard_id);
    if (!lb) continue;
    auto it = best.find(c.leaderboard_id);
    if (it == best.end()) {
      best.emplace(c.leaderboard_id, i);
      continue;
    }
    const auto& cur = candidates[it->second];
    bool better = lb->higher_is_better ? c.normalized_value > cur.normalized_value
                                       : c.normalized_value < cur.normalized_value;
    bool tie = c.normalized_value == cur.normalized_value;
    if (better || (tie && c.posterior > cur.posterior)) it->second = i;
  }
  std::vector<std::size_t> kept;
  for (const auto& [_, i] : best) {
    if (candidates[i].posterior >= t2) kept.push_back(i);
  }
  std::sort(kept.begin(), kept.end());
  std::vector<ResultRecord> out;
  for (std::size_t i : kept) out.push_back(to_record(candidates[i]));
  return out;
}

}  // namespace axtract
