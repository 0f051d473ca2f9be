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
#include <vector>

#include "axtract/pipeline.hpp"
#include "axtract/source.hpp"

namespace axtract::testing {

std::filesystem::path data_dir();
std::filesystem::path cli_path();
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& data);

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

PaperSource source_from(const std::string& paper_id, const std::string& main_tex,
                        std::map<std::string, std::string> extra_files = {});
PaperDocument ingest_tex(const std::string& paper_id, const std::string& main_tex);

// Table from rows of cell text; first row and first column are headers.
RawTable make_table(const std::string& table_id, const std::vector<std::vector<std::string>>& rows,
                    const std::string& caption = "");

// Mini-corpus paper directories and archives, in a fixed order.
std::vector<std::filesystem::path> minicorpus_sources();

// Segmenter weights used for the shipped mini-corpus models.
TrainConfig minicorpus_segmenter_config();

struct MiniCorpusModels {
  TableTypeModel table_type;
  ClassifierModel segmenter;
};
// Trains both classifiers on the mini-corpus gold segmentation.
MiniCorpusModels train_minicorpus_models();

// Mini-corpus config with the evidence strategy replaced.
PipelineConfig minicorpus_config(EvidenceStrategy strategy = EvidenceStrategy::kCombined);

}  // namespace axtract::testing
