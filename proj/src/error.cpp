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


#include "axtract/error.hpp"

#include "json.hpp"

#include "axtract/diagnostics.hpp"

namespace axtract {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNoMainFile: return "NoMainFile";
    case ErrorCode::kUnreadableArchive: return "UnreadableArchive";
    case ErrorCode::kEmptyClass: return "EmptyClass";
    case ErrorCode::kDuplicateLeaderboard: return "DuplicateLeaderboard";
    case ErrorCode::kMalformedTaxonomy: return "MalformedTaxonomy";
    case ErrorCode::kMissingExtras: return "MissingExtras";
    case ErrorCode::kNotEvidence: return "NotEvidence";
    case ErrorCode::kNotNumeric: return "NotNumeric";
    case ErrorCode::kMalformedGold: return "MalformedGold";
    case ErrorCode::kUnknownGranularity: return "UnknownGranularity";
    case ErrorCode::kUnknownLeaderboard: return "UnknownLeaderboard";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kMalformedModel: return "MalformedModel";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

std::size_t Diagnostics::count(const std::string& kind) const {
  std::size_t n = 0;
  for (const auto& d : items_) n += d.kind == kind ? 1 : 0;
  return n;
}

std::string Diagnostics::to_jsonl() const {
  std::string out;
  for (const auto& d : items_) {
    nlohmann::ordered_json j;
    j["paper_id"] = d.paper_id;
    j["kind"] = d.kind;
    j["message"] = d.message;
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace axtract
