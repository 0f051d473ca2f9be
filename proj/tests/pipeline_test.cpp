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


#include <gtest/gtest.h>

#include "axtract/error.hpp"
#include "axtract/evaluation.hpp"
#include "axtract/pipeline.hpp"
#include "axtract/serialization.hpp"
#include "support.hpp"

namespace axtract {
namespace {

namespace fs = std::filesystem;

const Pipeline& pipeline() {
  static const Pipeline p(testing::minicorpus_config());
  return p;
}

std::string records_json(const PaperExtraction& e) { return dump(to_json(e.records)); }

TEST(Pipeline, ScaleNetTopOneRecord) {
  auto e = pipeline().extract(testing::data_dir() / "papers" / "scalenet");
  ASSERT_FALSE(e.failed);
  const ResultRecord* top1 = nullptr;
  for (const auto& r : e.records) {
    if (r.metric == "Top 1 Accuracy") top1 = &r;
  }
  ASSERT_NE(top1, nullptr);
  EXPECT_EQ(top1->paper_id, "scalenet");
  EXPECT_EQ(top1->task, "Image Classification");
  EXPECT_EQ(top1->dataset, "ImageNet");
  EXPECT_NEAR(top1->value, 0.844, 1e-12);
  EXPECT_EQ(top1->model, "ScaleNet-B7");
  EXPECT_EQ(e.tables.size(), 3u);
  EXPECT_EQ(e.tables[0].type.decided_type, TableType::kIrrelevant);
}

TEST(Pipeline, IrrelevantPaperHasNoRecords) {
  auto e = pipeline().extract(testing::data_dir() / "papers" / "corpusstats");
  EXPECT_FALSE(e.failed);
  EXPECT_TRUE(e.records.empty());
  EXPECT_TRUE(e.candidates.empty());
  EXPECT_EQ(e.diagnostics.count("NoRelevantTables"), 1u);
  for (const auto& seg : e.tables) {
    for (const auto& row : seg.classes) {
      for (CellLabel l : row) EXPECT_TRUE(l == CellLabel::kNumeric || l == CellLabel::kOther);
    }
  }
}

TEST(Pipeline, AblationTablesAreLinkedButLoseToResults) {
  auto e = pipeline().extract(testing::data_dir() / "papers" / "headline");
  ASSERT_EQ(e.tables.size(), 2u);
  EXPECT_EQ(e.tables[1].type.decided_type, TableType::kAblation);
  std::size_t ablation_cands = 0;
  for (const auto& c : e.candidates) ablation_cands += c.table_id == e.tables[1].table.table_id;
  EXPECT_EQ(ablation_cands, 9u);
  ASSERT_EQ(e.records.size(), 3u);
  for (const auto& r : e.records) {
    EXPECT_EQ(r.table_id, e.tables[0].table.table_id);
    EXPECT_EQ(r.model, "NMT-2");
  }
}

TEST(Pipeline, EndToEndMatchesGold) {
  auto results = pipeline().extract_all(testing::minicorpus_sources(), 2);
  std::vector<ResultRecord> pred;
  for (const auto& e : results) {
    EXPECT_FALSE(e.failed) << e.document.paper_id;
    pred.insert(pred.end(), e.records.begin(), e.records.end());
  }
  auto gold = load_gold(testing::data_dir() / "gold.json", pipeline().taxonomy());
  ASSERT_EQ(gold.size(), 13u);
  auto rep = evaluate_records(pred, gold, Granularity::kTdms);
  EXPECT_DOUBLE_EQ(rep.micro.precision, 1.0);
  EXPECT_DOUBLE_EQ(rep.micro.recall, 1.0);
  EXPECT_DOUBLE_EQ(rep.macro.f1, 1.0);
}

TEST(Pipeline, DeterministicAcrossRunsAndJobs) {
  auto sources = testing::minicorpus_sources();
  auto seq = pipeline().extract_all(sources, 1);
  auto par = pipeline().extract_all(sources, 4);
  ASSERT_EQ(seq.size(), sources.size());
  ASSERT_EQ(par.size(), sources.size());
  for (std::size_t i = 0; i < seq.size(); ++i) {
    EXPECT_EQ(seq[i].document.paper_id, par[i].document.paper_id);
    EXPECT_EQ(records_json(seq[i]), records_json(par[i]));
    ASSERT_EQ(seq[i].candidates.size(), par[i].candidates.size());
    for (std::size_t j = 0; j < seq[i].candidates.size(); ++j) {
      EXPECT_EQ(dump(to_json(seq[i].candidates[j])), dump(to_json(par[i].candidates[j])));
    }
    EXPECT_EQ(seq[i].diagnostics.to_jsonl(), par[i].diagnostics.to_jsonl());
  }
}

TEST(Pipeline, FailedPaperDoesNotStopOthers) {
  testing::TempDir dir("pipe");
  testing::write_file(dir.path() / "broken.tar.gz", "\x1f\x8b garbage");
  std::vector<fs::path> sources = {testing::data_dir() / "papers" / "ulmtext", dir.path() / "broken.tar.gz",
                                   dir.path() / "missing"};
  auto out = pipeline().extract_all(sources, 2);
  ASSERT_EQ(out.size(), 3u);
  EXPECT_FALSE(out[0].failed);
  EXPECT_EQ(out[0].records.size(), 3u);
  EXPECT_TRUE(out[1].failed);
  EXPECT_EQ(out[1].diagnostics.count("ExtractionFailed"), 1u);
  EXPECT_TRUE(out[2].failed);
  EXPECT_TRUE(out[2].records.empty());
}

TEST(Pipeline, CellCandidatesRankAllLeaderboards) {
  auto e = pipeline().extract(testing::data_dir() / "papers" / "ulmtext");
  const auto& seg = e.tables[0];
  CellPosition pos{};
  bool found = false;
  for (std::size_t r = 0; r < seg.table.rows() && !found; ++r) {
    for (std::size_t c = 0; c < seg.table.cols() && !found; ++c) {
      if (seg.table.at(r, c).content == "4.6") {
        pos = {r, c};
        found = true;
      }
    }
  }
  ASSERT_TRUE(found);
  auto cands = pipeline().cell_candidates(e.document, seg, pos);
  ASSERT_EQ(cands.size(), pipeline().taxonomy().leaderboards().size());
  EXPECT_EQ(cands[0].leaderboard_id, "Sentiment Analysis | IMDb | Error");
  for (std::size_t i = 1; i < cands.size(); ++i) EXPECT_GE(cands[i - 1].posterior, cands[i].posterior);
  EXPECT_THROW(pipeline().cell_candidates(e.document, seg, {0, 0}), Error);
}

// kIo stands for "no error": validation never raises it for these inputs.
ErrorCode config_error(const std::string& json) {
  try {
    validate(parse_config(json, testing::data_dir()));
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kIo;
}

TEST(Config, Validation) {
  EXPECT_EQ(config_error("{"), ErrorCode::kInvalidConfig);
  EXPECT_EQ(config_error(R"({})"), ErrorCode::kInvalidConfig);
  EXPECT_EQ(config_error(R"({"taxonomy": "nope.json"})"), ErrorCode::kInvalidConfig);
  EXPECT_EQ(config_error(R"({"taxonomy": "taxonomy.json", "thresholds": {"t1": 2}})"), ErrorCode::kInvalidConfig);
  EXPECT_EQ(config_error(R"({"taxonomy": "taxonomy.json", "evidence": {"strategy": "magic"}})"),
            ErrorCode::kInvalidConfig);
  EXPECT_EQ(config_error(R"({"taxonomy": "taxonomy.json", "bm25": {"k1": -1}})"), ErrorCode::kInvalidConfig);
  EXPECT_EQ(config_error(R"({"taxonomy": "taxonomy.json", "noise": {"noise_prob": {"table": 1.5}}})"),
            ErrorCode::kInvalidConfig);
  EXPECT_EQ(config_error(R"({"taxonomy": "taxonomy.json"})"), ErrorCode::kInvalidConfig);
  EXPECT_EQ(config_error(R"({"taxonomy": "taxonomy.json",
                             "models": {"table_type": "models/table_type.json", "segmenter": "models/segmenter.json"}})"),
            ErrorCode::kIo);
}

TEST(Config, LoadsMiniCorpusConfig) {
  auto cfg = load_config(testing::data_dir() / "config.json");
  EXPECT_EQ(cfg.strategy, EvidenceStrategy::kCombined);
  EXPECT_DOUBLE_EQ(cfg.thresholds.t1, 0.1);
  EXPECT_DOUBLE_EQ(cfg.thresholds.t2, 0.5);
  EXPECT_EQ(cfg.evidence_depth, 10u);
  ASSERT_TRUE(cfg.segmenter_model.has_value());
  EXPECT_TRUE(fs::exists(*cfg.segmenter_model));
}

TEST(Config, ShippedModelsEqualFreshTraining) {
  auto fresh = testing::train_minicorpus_models();
  auto cfg = load_config(testing::data_dir() / "config.json");
  EXPECT_TRUE(ClassifierModel::load(cfg.segmenter_model->string()) == fresh.segmenter);
  auto tt = TableTypeModel::load(cfg.table_type_model->string());
  EXPECT_TRUE(tt.leaderboard == fresh.table_type.leaderboard);
  EXPECT_TRUE(tt.ablation == fresh.table_type.ablation);
}

TEST(Config, InMemoryModelsGiveSameRecords) {
  auto fresh = testing::train_minicorpus_models();
  auto cfg = testing::minicorpus_config();
  Pipeline p(cfg, load_configured_taxonomy(cfg), fresh.table_type, fresh.segmenter);
  auto a = p.extract(testing::data_dir() / "papers" / "transmt.tar.gz");
  auto b = pipeline().extract(testing::data_dir() / "papers" / "transmt.tar.gz");
  EXPECT_EQ(records_json(a), records_json(b));
  EXPECT_EQ(a.records.size(), 3u);
}

}  // namespace
}  // namespace axtract
