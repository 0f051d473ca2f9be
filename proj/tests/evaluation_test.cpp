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

#include <random>

#include "axtract/error.hpp"
#include "axtract/evaluation.hpp"
#include "axtract/pipeline.hpp"
#include "oracles.hpp"
#include "support.hpp"

namespace axtract {
namespace {

ResultRecord rec(const std::string& paper, const std::string& t, const std::string& d, const std::string& m,
                 double v) {
  ResultRecord r;
  r.paper_id = paper;
  r.task = t;
  r.dataset = d;
  r.metric = m;
  r.value = v;
  return r;
}

GoldRecord gold(const std::string& paper, const std::string& t, const std::string& d, const std::string& m,
                double v) {
  GoldRecord g;
  g.paper_id = paper;
  g.task = t;
  g.dataset = d;
  g.metric = m;
  g.value = v;
  return g;
}

GoldRecord as_gold(const ResultRecord& r) { return gold(r.paper_id, r.task, r.dataset, r.metric, r.value); }

TEST(Evaluate, PerfectPrediction) {
  std::vector<ResultRecord> pred = {rec("a", "T", "D", "M", 1.5), rec("a", "T", "D", "N", 2), rec("b", "U", "E", "M", 3)};
  std::vector<GoldRecord> g;
  for (const auto& r : pred) g.push_back(as_gold(r));
  for (Granularity gr : {Granularity::kTdms, Granularity::kTdm, Granularity::kTask, Granularity::kDataset,
                         Granularity::kMetric}) {
    auto rep = evaluate_records(pred, g, gr);
    EXPECT_DOUBLE_EQ(rep.micro.precision, 1.0);
    EXPECT_DOUBLE_EQ(rep.micro.recall, 1.0);
    EXPECT_DOUBLE_EQ(rep.micro.f1, 1.0);
    EXPECT_DOUBLE_EQ(rep.macro.f1, 1.0);
  }
}

TEST(Evaluate, HalfRecall) {
  std::vector<GoldRecord> g = {gold("a", "T", "D", "M", 10), gold("a", "T", "D", "N", 20)};
  auto rep = evaluate_records({rec("a", "T", "D", "M", 10)}, g, Granularity::kTdms);
  EXPECT_DOUBLE_EQ(rep.micro.precision, 1.0);
  EXPECT_DOUBLE_EQ(rep.micro.recall, 0.5);
  EXPECT_NEAR(rep.micro.f1, 2.0 / 3.0, 1e-12);
}

TEST(Evaluate, OneOfTwoCorrect) {
  std::vector<GoldRecord> g = {gold("a", "T", "D", "M", 10), gold("a", "T", "D", "N", 20)};
  auto rep = evaluate_records({rec("a", "T", "D", "M", 10), rec("a", "T", "D", "N", 21)}, g, Granularity::kTdms);
  EXPECT_DOUBLE_EQ(rep.micro.precision, 0.5);
  EXPECT_DOUBLE_EQ(rep.micro.recall, 0.5);
  EXPECT_DOUBLE_EQ(rep.micro.f1, 0.5);
}

TEST(Evaluate, ValueToleranceAndCase) {
  std::vector<GoldRecord> g = {gold("a", "Task", "Data", "Metric", 0.844)};
  EXPECT_DOUBLE_EQ(evaluate_records({rec("a", "task", "data", "metric", 0.844 + 1e-9)}, g, Granularity::kTdms)
                       .micro.f1,
                   1.0);
  EXPECT_DOUBLE_EQ(evaluate_records({rec("a", "Task", "Data", "Metric", 0.845)}, g, Granularity::kTdms).micro.f1, 0.0);
  EXPECT_DOUBLE_EQ(evaluate_records({rec("a", "Task", "Data", "Metric", 0.845)}, g, Granularity::kTdm).micro.f1, 1.0);
}

TEST(Evaluate, EmptyInputs) {
  auto rep = evaluate_records({}, {gold("a", "T", "D", "M", 1)}, Granularity::kTdms);
  EXPECT_DOUBLE_EQ(rep.micro.precision, 0.0);
  EXPECT_DOUBLE_EQ(rep.micro.recall, 0.0);
  EXPECT_DOUBLE_EQ(rep.micro.f1, 0.0);
  auto none = evaluate_records({}, {}, Granularity::kTdms);
  EXPECT_DOUBLE_EQ(none.micro.f1, 0.0);
}

std::vector<ResultRecord> random_records(oracle::Rng& rng, std::size_t n) {
  const char* tasks[] = {"A", "B"};
  const char* datasets[] = {"X", "Y", "Z"};
  const char* metrics[] = {"M", "N"};
  std::vector<ResultRecord> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(rec("p" + std::to_string(rng() % 4), tasks[rng() % 2], datasets[rng() % 3], metrics[rng() % 2],
                      static_cast<double>(rng() % 4) * 0.5));
  }
  return out;
}

TEST(Evaluate, MatchesBruteForceOnRandomSets) {
  oracle::Rng rng(31);
  for (int round = 0; round < 1000; ++round) {
    auto pred = random_records(rng, rng() % 12);
    std::vector<GoldRecord> g;
    for (const auto& r : random_records(rng, rng() % 12)) g.push_back(as_gold(r));
    for (Granularity gr : {Granularity::kTdms, Granularity::kTdm, Granularity::kTask, Granularity::kDataset,
                           Granularity::kMetric}) {
      auto rep = evaluate_records(pred, g, gr);
      auto want = oracle::brute_evaluate(pred, g, gr);
      ASSERT_NEAR(rep.micro.precision, want.micro_p, 1e-12) << round;
      ASSERT_NEAR(rep.micro.recall, want.micro_r, 1e-12) << round;
      ASSERT_NEAR(rep.micro.f1, want.micro_f1, 1e-12) << round;
      ASSERT_NEAR(rep.macro.precision, want.macro_p, 1e-12) << round;
      ASSERT_NEAR(rep.macro.recall, want.macro_r, 1e-12) << round;
      ASSERT_NEAR(rep.macro.f1, want.macro_f1, 1e-12) << round;
      if (rep.micro.precision + rep.micro.recall > 0) {
        EXPECT_NEAR(rep.micro.f1,
                    2 * rep.micro.precision * rep.micro.recall / (rep.micro.precision + rep.micro.recall), 1e-12);
      }
    }
  }
}

TEST(Evaluate, SwappingRolesSwapsPrecisionAndRecall) {
  oracle::Rng rng(32);
  for (int round = 0; round < 300; ++round) {
    auto a = random_records(rng, 1 + rng() % 10);
    auto b = random_records(rng, 1 + rng() % 10);
    std::vector<GoldRecord> ga, gb;
    for (const auto& r : a) ga.push_back(as_gold(r));
    for (const auto& r : b) gb.push_back(as_gold(r));
    auto ab = evaluate_records(a, gb, Granularity::kTdms);
    auto ba = evaluate_records(b, ga, Granularity::kTdms);
    EXPECT_NEAR(ab.micro.precision, ba.micro.recall, 1e-12);
    EXPECT_NEAR(ab.micro.recall, ba.micro.precision, 1e-12);
    EXPECT_NEAR(ab.micro.f1, ba.micro.f1, 1e-12);
  }
}

TEST(Evaluate, LeaderboardMacroAxis) {
  std::vector<GoldRecord> g = {gold("a", "T", "D", "M", 1), gold("b", "T", "D", "M", 2), gold("a", "T", "E", "M", 3)};
  auto rep = evaluate_records({rec("a", "T", "D", "M", 1), rec("b", "T", "D", "M", 2)}, g, Granularity::kTdms,
                              MacroAxis::kLeaderboard);
  ASSERT_EQ(rep.per_group.size(), 2u);
  EXPECT_DOUBLE_EQ(rep.macro.recall, 0.5);
  EXPECT_DOUBLE_EQ(rep.macro.precision, 0.5);
  EXPECT_NEAR(rep.micro.recall, 2.0 / 3.0, 1e-12);
  ASSERT_EQ(rep.per_paper.size(), 2u);
}

TEST(Evaluate, NamesParse) {
  EXPECT_EQ(parse_granularity("TDMS"), Granularity::kTdms);
  EXPECT_EQ(parse_granularity("tdm"), Granularity::kTdm);
  try {
    parse_granularity("tdmx");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownGranularity);
  }
  EXPECT_EQ(parse_macro_axis("leaderboard"), MacroAxis::kLeaderboard);
  EXPECT_THROW(parse_macro_axis("table"), Error);
}

TEST(ParseGold, CanonicalizesAndFlags) {
  auto t = load_taxonomy(testing::data_dir() / "taxonomy.json");
  auto g = parse_gold(R"([{"paper_id": "scalenet", "task": "image classification", "dataset": "imagenet",
                           "metric": "Top 1 Accuracy", "value": 0.844, "table_id": "table_02", "row": 4, "col": 1},
                          {"paper_id": "x", "task": "Parsing", "dataset": "PTB", "metric": "F1", "value": 95}])",
                      t);
  ASSERT_EQ(g.size(), 2u);
  EXPECT_EQ(g[0].task, "Image Classification");
  EXPECT_EQ(g[0].dataset, "ImageNet");
  EXPECT_FALSE(g[0].unknown_entity);
  EXPECT_EQ(g[0].table_id, "table_02");
  EXPECT_EQ(g[0].row, 4u);
  EXPECT_TRUE(g[1].unknown_entity);
  EXPECT_EQ(g[1].task, "Parsing");
  EXPECT_TRUE(parse_gold("", t).empty());
  EXPECT_TRUE(parse_gold(R"({"records": []})", t).empty());
  EXPECT_THROW(parse_gold(R"([{"paper_id": "x"}])", t), Error);
  EXPECT_THROW(parse_gold(R"({"records": 3})", t), Error);
}

TEST(Reports, JsonAndText) {
  std::vector<GoldRecord> g = {gold("a", "T", "D", "M", 1)};
  auto rep = evaluate_records({rec("a", "T", "D", "M", 1)}, g, Granularity::kTdms);
  auto j = report_to_json({rep});
  EXPECT_NE(j.find("\"tdms\""), std::string::npos) << j;
  auto txt = report_to_text({rep});
  EXPECT_NE(txt.find("100.0"), std::string::npos) << txt;
}

struct LinkCorpus {
  GoldSegmentation gold = load_gold_segmentation(testing::data_dir() / "segmentation.json");
  GoldCorpus corpus{gold};
  PipelineConfig config = testing::minicorpus_config(EvidenceStrategy::kCombined);
  Taxonomy taxonomy = load_configured_taxonomy(config);
};

const LinkCorpus& link_corpus() {
  static const LinkCorpus c;
  return c;
}

TEST(TopK, MonotoneInKAndCompleteAtTaxonomySize) {
  const auto& c = link_corpus();
  double prev = 0;
  for (std::size_t k = 1; k <= c.taxonomy.leaderboards().size(); ++k) {
    auto acc = topk_linking_accuracy(c.corpus, c.taxonomy, c.config.noise, k);
    EXPECT_EQ(acc.cells, 41u);
    EXPECT_GE(acc.leaderboard, prev);
    EXPECT_GE(acc.task, acc.leaderboard);
    EXPECT_GE(acc.dataset, acc.leaderboard);
    EXPECT_GE(acc.metric, acc.leaderboard);
    prev = acc.leaderboard;
  }
  EXPECT_DOUBLE_EQ(prev, 1.0);
}

TEST(TopK, SingleLeaderboardTaxonomy) {
  const auto& c = link_corpus();
  Leaderboard only = *c.taxonomy.find("Image Classification | ImageNet | Top 1 Accuracy");
  Taxonomy t = generate_evidences(Taxonomy({only}), EvidenceStrategy::kBagOfWords);
  std::size_t expected = 0, links = 0;
  for (const auto& g : c.gold.tables) {
    for (const auto& l : g.links) {
      ++links;
      expected += l.dataset == "ImageNet" && l.metric == "Top 1 Accuracy";
    }
  }
  auto acc = topk_linking_accuracy(c.corpus, t, c.config.noise, 1);
  EXPECT_EQ(acc.cells, links);
  EXPECT_NEAR(acc.leaderboard, static_cast<double>(expected) / static_cast<double>(links), 1e-12);
  EXPECT_GT(expected, 0u);
}

TEST(TopK, RicherEvidenceHelps) {
  const auto& c = link_corpus();
  auto bow = testing::minicorpus_config(EvidenceStrategy::kBagOfWords);
  auto abbr = testing::minicorpus_config(EvidenceStrategy::kAbbreviations);
  auto t_bow = load_configured_taxonomy(bow);
  auto t_abbr = load_configured_taxonomy(abbr);
  auto a1 = topk_linking_accuracy(c.corpus, t_abbr, c.config.noise, 1);
  auto b1 = topk_linking_accuracy(c.corpus, t_bow, c.config.noise, 1);
  auto a5 = topk_linking_accuracy(c.corpus, t_abbr, c.config.noise, 5);
  auto b5 = topk_linking_accuracy(c.corpus, t_bow, c.config.noise, 5);
  EXPECT_GE(a1.leaderboard, b1.leaderboard);
  EXPECT_GE(a5.leaderboard, b5.leaderboard);
  EXPECT_GE(b5.leaderboard, b1.leaderboard);
  EXPECT_DOUBLE_EQ(topk_linking_accuracy(c.corpus, c.taxonomy, c.config.noise, 1).leaderboard, 1.0);
}

}  // namespace
}  // namespace axtract
