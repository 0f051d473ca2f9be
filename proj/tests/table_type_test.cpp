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

#include <algorithm>
#include <random>

#include "axtract/error.hpp"
#include "axtract/segmentation.hpp"
#include "axtract/table_type.hpp"
#include "oracles.hpp"
#include "support.hpp"

namespace axtract {
namespace {

TEST(DecideTableType, ThresholdRule) {
  EXPECT_EQ(decide_table_type(0.7, 0.2, 0.5), TableType::kLeaderboard);
  EXPECT_EQ(decide_table_type(0.3, 0.3, 0.5), TableType::kIrrelevant);
  EXPECT_EQ(decide_table_type(0.2, 0.9, 0.5), TableType::kAblation);
  EXPECT_EQ(decide_table_type(0.6, 0.8, 0.5), TableType::kAblation);
  EXPECT_EQ(decide_table_type(0.8, 0.8, 0.5), TableType::kLeaderboard);
  EXPECT_EQ(decide_table_type(0.5, 0.0, 0.5), TableType::kLeaderboard);
}

TEST(DecideTableType, RandomScoresFollowRule) {
  oracle::Rng rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    double lb = u(rng), ab = u(rng), th = u(rng);
    TableType got = decide_table_type(lb, ab, th);
    if (std::max(lb, ab) < th) {
      EXPECT_EQ(got, TableType::kIrrelevant);
    } else if (lb >= th && lb >= ab) {
      EXPECT_EQ(got, TableType::kLeaderboard);
    } else {
      EXPECT_EQ(got, TableType::kAblation);
    }
  }
}

TEST(TableTypeNames, RoundTrip) {
  for (TableType t : {TableType::kLeaderboard, TableType::kAblation, TableType::kIrrelevant}) {
    EXPECT_EQ(parse_table_type(to_string(t)), t);
  }
  EXPECT_THROW(parse_table_type("chart"), Error);
}

std::vector<std::pair<RawTable, TableType>> toy_gold() {
  using testing::make_table;
  return {
      {make_table("1", {{"Model", "BLEU"}, {"Ours", "29.1"}}, "Comparison with the state of the art on WMT"),
       TableType::kLeaderboard},
      {make_table("2", {{"Model", "Acc"}, {"Ours", "84.4"}}, "Results on ImageNet compared to prior work"),
       TableType::kLeaderboard},
      {make_table("3", {{"Variant", "BLEU"}, {"w/o attention", "27.0"}}, "Ablation study of our components"),
       TableType::kAblation},
      {make_table("4", {{"Variant", "Acc"}, {"without pretraining", "80.1"}}, "Ablation of pretraining"),
       TableType::kAblation},
      {make_table("5", {{"Corpus", "Tokens"}, {"News", "4.5M"}}, "Corpus statistics"), TableType::kIrrelevant},
  };
}

TEST(TrainTableType, SeparatesToyClasses) {
  auto model = train_table_type(toy_gold());
  auto p = classify_table_type(
      testing::make_table("q", {{"Model", "BLEU"}, {"Ours", "30.0"}}, "Comparison with the state of the art"), model);
  EXPECT_EQ(p.decided_type, TableType::kLeaderboard);
  EXPECT_GT(p.leaderboard_prob, p.ablation_prob);
  auto a = classify_table_type(
      testing::make_table("q", {{"Variant", "Acc"}, {"w/o dropout", "1"}}, "Ablation study"), model);
  EXPECT_EQ(a.decided_type, TableType::kAblation);
  auto i = classify_table_type(testing::make_table("q", {{"Corpus", "Tokens"}}, "Corpus statistics"), model);
  EXPECT_EQ(i.decided_type, TableType::kIrrelevant);
}

TEST(TrainTableType, NeedsBothPositiveClasses) {
  auto gold = toy_gold();
  gold.erase(std::remove_if(gold.begin(), gold.end(),
                            [](const auto& g) { return g.second == TableType::kAblation; }),
             gold.end());
  try {
    train_table_type(gold);
    FAIL() << "no error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyClass);
  }
}

TEST(TrainTableType, GoldOrderDoesNotMatter) {
  auto gold = toy_gold();
  auto base = train_table_type(gold).to_json();
  std::mt19937_64 rng(9);
  for (int i = 0; i < 10; ++i) {
    std::shuffle(gold.begin(), gold.end(), rng);
    EXPECT_EQ(train_table_type(gold).to_json(), base);
  }
}

TEST(TableTypeModel, SaveLoadPreservesScores) {
  auto model = train_table_type(toy_gold());
  testing::TempDir dir("tt");
  auto path = (dir.path() / "m.json").string();
  model.save(path);
  auto loaded = TableTypeModel::load(path);
  for (const auto& [t, _] : toy_gold()) {
    auto a = classify_table_type(t, model);
    auto b = classify_table_type(t, loaded);
    EXPECT_EQ(a.leaderboard_prob, b.leaderboard_prob);
    EXPECT_EQ(a.ablation_prob, b.ablation_prob);
  }
  EXPECT_THROW(TableTypeModel::from_json(R"({"format": "other"})"), Error);
}

TEST(TableTypeModel, ShippedModelClassifiesMiniCorpus) {
  auto model = TableTypeModel::load((testing::data_dir() / "models" / "table_type.json").string());
  auto gold = load_gold_segmentation(testing::data_dir() / "segmentation.json");
  GoldCorpus corpus(gold);
  ASSERT_FALSE(corpus.views().empty());
  for (const auto& v : corpus.views()) {
    EXPECT_EQ(classify_table_type(*v.table, model).decided_type, v.gold->type)
        << v.gold->paper_id << " " << v.gold->table_id;
  }
}

TEST(TableTypeModel, HeadlineResultsTableIsLeaderboard) {
  auto model = testing::train_minicorpus_models().table_type;
  auto doc = ingest(load_bundle(testing::data_dir() / "papers" / "headline")).document;
  ASSERT_FALSE(doc.tables.empty());
  auto p = classify_table_type(doc.tables[0], model);
  EXPECT_EQ(p.decided_type, TableType::kLeaderboard);
  EXPECT_GE(p.leaderboard_prob, 0.5);
}

}  // namespace
}  // namespace axtract
