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

#include "axtract/filtering.hpp"
#include "axtract/linking.hpp"
#include "axtract/segmentation.hpp"
#include "axtract/source.hpp"
#include "json.hpp"

// JSON forms of the pipeline's data types. Field order is fixed so output is
// byte-stable.
namespace axtract {

using Json = nlohmann::ordered_json;

Json to_json(const Cell& cell);
Json to_json(const RawTable& table);
Json to_json(const PaperDocument& doc);
Json to_json(const TableTypePrediction& prediction);
Json to_json(const SegmentedTable& seg);
Json to_json(const ScoredCandidate& candidate);
Json to_json(const ResultRecord& record);
Json to_json(const std::vector<ResultRecord>& records);
Json to_json(const Diagnostic& diagnostic);

Cell cell_from_json(const Json& j);
RawTable table_from_json(const Json& j);
PaperDocument document_from_json(const Json& j);
SegmentedTable segmented_from_json(const Json& j);
ResultRecord record_from_json(const Json& j);
std::vector<ResultRecord> records_from_json(const Json& j);

// Dump with invalid UTF-8 replaced, two-space indent and a final newline.
std::string dump(const Json& j);

}  // namespace axtract
