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
#include <vector>

#include "axtract/linking.hpp"
#include "axtract/taxonomy.hpp"

namespace axtract {

struct ResultRecord {
  std::string paper_id;
  std::string task;
  std::string dataset;
  std::string metric;
  double value = 0.0;
  std::string model;
  std::string leaderboard_id;
  double confidence = 0.0;
  std::string table_id;
  std::size_t row = 0;
  std::size_t col = 0;

  friend bool operator==(const ResultRecord&, const ResultRecord&) = default;
};

struct FilterThresholds {
  double t1 = 0.1;
  double t2 = 0.5;
};

// Candidates are expected in document order. Steps:
//   1. drop candidates not attributed to a paper_model cell;
//   2. drop confidence < t1;
//   3. per leaderboard keep the best value (max when higher is better, else
//      min), ties going to higher confidence, then the earlier candidate;
//   4. drop confidence < t2.
// Output keeps document order. Candidates for unknown leaderboards are dropped.
std::vector<ResultRecord> filter_results(const std::vector<ScoredCandidate>& candidates,
                                         const Taxonomy& taxonomy, double t1 = 0.1, double t2 = 0.5);

ResultRecord to_record(const ScoredCandidate& candidate);

}  // namespace axtract
