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
#include <cstdio>
#include <random>

#include "axtract/error.hpp"
#include "axtract/linking.hpp"
#include "axtract/pipeline.hpp"
#include "oracles.hpp"
#include "support.hpp"

namespace axtract {
namespace {

Leaderboard lb(std::string task, std::string dataset, std::string metric) {
  Leaderboard l;
  l.task = std::move(task);
  l.dataset = std::move(dataset);
  l.metric = std::move(metric);
  l.leaderboard_id = make_leaderboard_id(l.task, l.dataset, l.metric);
  return l;
}

Taxonomy two_boards() {
  return generate_evidences(Taxonomy({lb("T", "D1", "Accuracy"), lb("T", "D2", "BLEU")}),
                            EvidenceStrategy::kBagOfWords);
}

NoiseModel fixed_noise(double table, double caption) {
  NoiseModel n = NoiseModel::defaults();
  n.noise_prob[ContextKind::kTable] = table;
  n.noise_prob[ContextKind::kCaption] = caption;
  for (EntityType t : kEntityTypes) n.entity_given_noise[t] = 1.0 / 3.0;
  return n;
}

double posterior_of(const std::vector<LeaderboardScore>& scores, std::size_t lb) {
  for (const auto& s : scores) {
    if (s.leaderboard == lb) return s.posterior;
  }
  ADD_FAILURE() << "missing leaderboard " << lb;
  return -1;
}

TEST(ScoreLeaderboards, EmptyEvidenceIsUniform) {
  Taxonomy t = generate_evidences(
      Taxonomy({lb("A", "B", "C"), lb("A", "B", "D"), lb("A", "E", "C"), lb("F", "G", "H")}),
      EvidenceStrategy::kBagOfWords);
  auto scores = score_leaderboards(EvidenceSet{}, t, NoiseModel::defaults());
  ASSERT_EQ(scores.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_DOUBLE_EQ(scores[i].posterior, 0.25);
    EXPECT_EQ(scores[i].leaderboard, i);
  }
}

TEST(ScoreLeaderboards, NoiselessEvidenceDecides) {
  auto t = two_boards();
  EvidenceSet ev;
  ev.add({"d1", EntityType::kDataset, "D1", ContextKind::kTable});
  auto scores = score_leaderboards(ev, t, fixed_noise(0, 0));
  EXPECT_DOUBLE_EQ(posterior_of(scores, 0), 1.0);
  EXPECT_DOUBLE_EQ(posterior_of(scores, 1), 0.0);
  EXPECT_EQ(scores[0].leaderboard, 0u);
}

TEST(ScoreLeaderboards, ContradictingNoiselessEvidenceFallsBackToUniform) {
  auto t = two_boards();
  EvidenceSet ev;
  ev.add({"d1", EntityType::kDataset, "D1", ContextKind::kTable});
  ev.add({"bleu", EntityType::kMetric, "BLEU", ContextKind::kCaption});
  auto scores = score_leaderboards(ev, t, fixed_noise(0, 0));
  EXPECT_DOUBLE_EQ(posterior_of(scores, 0), 0.5);
  EXPECT_DOUBLE_EQ(posterior_of(scores, 1), 0.5);
}

// Table noise 0.1, caption noise 0.2, entity given noise 1/3:
//   board 1: (0.1/3 + 0.9) (0.2/3) = 0.56/9
//   board 2: (0.1/3) (0.2/3 + 0.8) = 0.26/9
TEST(ScoreLeaderboards, NoiseMixtureByHand) {
  auto t = two_boards();
  EvidenceSet ev;
  ev.add({"d1", EntityType::kDataset, "D1", ContextKind::kTable});
  ev.add({"bleu", EntityType::kMetric, "BLEU", ContextKind::kCaption});
  auto scores = score_leaderboards(ev, t, fixed_noise(0.1, 0.2));
  EXPECT_NEAR(posterior_of(scores, 0), 28.0 / 41.0, 1e-12);
  EXPECT_NEAR(posterior_of(scores, 1), 13.0 / 41.0, 1e-12);
  EXPECT_EQ(scores[0].leaderboard, 0u);
}

TEST(ScoreLeaderboards, RepeatedMentionCountsOnce) {
  Taxonomy t = generate_evidences(Taxonomy({lb("T", "D", "Top 1 Accuracy"), lb("T", "D", "Top 5 Accuracy")}),
                                  EvidenceStrategy::kBagOfWords);
  EvidenceSet one, both;
  one.add({"accuracy", EntityType::kMetric, "Top 1 Accuracy", ContextKind::kTable});
  both = one;
  both.add({"accuracy", EntityType::kMetric, "Top 5 Accuracy", ContextKind::kTable});
  both.add({"accuracy", EntityType::kMetric, "Top 5 Accuracy", ContextKind::kTable});
  EXPECT_EQ(both.size(), 2u);
  auto a = score_leaderboards(one, t, NoiseModel::defaults());
  auto b = score_leaderboards(both, t, NoiseModel::defaults());
  for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ(posterior_of(a, i), posterior_of(b, i));
}

TEST(ScoreLeaderboards, MatchesDirectProduct) {
  oracle::Rng rng(11);
  for (int round = 0; round < 500; ++round) {
    auto t = oracle::random_taxonomy(rng, 12);
    auto ev = oracle::random_evidence(rng, t, 8);
    auto noise = oracle::random_noise(rng);
    auto want = oracle::direct_posteriors(ev, t, noise);
    auto got = score_leaderboards(ev, t, noise);
    ASSERT_EQ(got.size(), want.size());
    double sum = 0;
    for (std::size_t i = 0; i < got.size(); ++i) {
      EXPECT_NEAR(got[i].posterior, want[got[i].leaderboard], 1e-9);
      sum += got[i].posterior;
      if (i > 0) {
        EXPECT_TRUE(got[i - 1].posterior > got[i].posterior ||
                    (got[i - 1].posterior == got[i].posterior && got[i - 1].leaderboard < got[i].leaderboard));
      }
    }
    EXPECT_NEAR(sum, 1.0, 1e-9);
  }
}

TEST(ScoreLeaderboards, TaxonomyOrderDoesNotChangePosteriors) {
  oracle::Rng rng(3);
  for (int round = 0; round < 100; ++round) {
    auto t = oracle::random_taxonomy(rng, 8);
    auto ev = oracle::random_evidence(rng, t, 6);
    auto noise = oracle::random_noise(rng);
    auto lbs = t.leaderboards();
    std::shuffle(lbs.begin(), lbs.end(), rng);
    Taxonomy shuffled(lbs);
    for (EntityType type : kEntityTypes) {
      for (const auto& e : t.entities(type)) {
        for (const auto& m : t.evidence(type, e)) shuffled.add_evidence(type, e, m);
      }
    }
    auto a = score_leaderboards(ev, t, noise);
    auto b = score_leaderboards(ev, shuffled, noise);
    for (const auto& s : a) {
      const auto& id = t.leaderboards()[s.leaderboard].leaderboard_id;
      EXPECT_NEAR(s.posterior, posterior_of(b, *shuffled.index_of(id)), 1e-12);
    }
  }
}

// A mention listed by a single dataset multiplies that dataset's boards by a
// factor at least as large as every other board's, so no board with another
// dataset can overtake them.
TEST(ScoreLeaderboards, UniqueDatasetMentionKeepsRanking) {
  oracle::Rng rng(21);
  int checked = 0;
  for (int round = 0; round < 300; ++round) {
    auto t = oracle::random_taxonomy(rng, 10);
    auto noise = oracle::random_noise(rng);
    auto ev = oracle::random_evidence(rng, t, 5);
    std::vector<std::pair<std::string, std::string>> unique;
    for (const auto& [m, sharers] : t.mention_index(EntityType::kDataset)) {
      if (sharers.size() == 1) unique.emplace_back(m, *sharers.begin());
    }
    if (unique.empty()) continue;
    auto [mention, dataset] = unique[rng() % unique.size()];
    auto before = oracle::direct_posteriors(ev, t, noise);
    EvidenceSet more = ev;
    more.add({mention, EntityType::kDataset, dataset, kContextKinds[rng() % 5]});
    auto after = oracle::direct_posteriors(more, t, noise);
    auto scored = score_leaderboards(more, t, noise);
    const auto& lbs = t.leaderboards();
    for (std::size_t k = 0; k < lbs.size(); ++k) {
      if (lbs[k].dataset != dataset) continue;
      for (std::size_t j = 0; j < lbs.size(); ++j) {
        if (lbs[j].dataset == dataset || before[k] < before[j]) continue;
        EXPECT_GE(posterior_of(scored, k) + 1e-12, posterior_of(scored, j));
        EXPECT_GE(after[k] + 1e-12, after[j]);
        ++checked;
      }
    }
  }
  EXPECT_GT(checked, 100);
}

TEST(NoiseModel, DefaultsAndValidation) {
  auto n = NoiseModel::defaults();
  EXPECT_DOUBLE_EQ(n.noise(ContextKind::kTable), 0.1);
  EXPECT_DOUBLE_EQ(n.noise(ContextKind::kCaption), 0.2);
  EXPECT_DOUBLE_EQ(n.noise(ContextKind::kMentions), 0.3);
  EXPECT_DOUBLE_EQ(n.noise(ContextKind::kAbstract), 0.5);
  EXPECT_DOUBLE_EQ(n.noise(ContextKind::kPaper), 0.8);
  EXPECT_NO_THROW(n.validate());
  auto bad = n;
  bad.noise_prob[ContextKind::kPaper] = 1.5;
  EXPECT_THROW(bad.validate(), Error);
  bad = n;
  bad.entity_given_noise[EntityType::kTask] = 0.9;
  EXPECT_THROW(bad.validate(), Error);
}

TEST(GatherEvidence, TokenBoundariesOnly) {
  auto t = generate_evidences(Taxonomy({lb("Machine Translation", "WMT2014 English-German", "BLEU score")}),
                              EvidenceStrategy::kBagOfWords);
  EvidenceSet ev;
  gather_context_evidence(ContextKind::kCaption, "BLEU scores on newstest for neural Machine Translation", t, ev);
  std::vector<std::string> mentions;
  for (const auto& i : ev.items()) mentions.push_back(i.mention);
  EXPECT_EQ(mentions, (std::vector<std::string>{"bleu", "machine translation"}));
  for (const auto& i : ev.items()) EXPECT_EQ(i.context, ContextKind::kCaption);
  EvidenceSet none;
  gather_context_evidence(ContextKind::kPaper, "bleurt and scores", t, none);
  EXPECT_TRUE(none.empty());
}

struct Corpus {
  PipelineConfig config = testing::minicorpus_config(EvidenceStrategy::kCombined);
  Taxonomy taxonomy = load_configured_taxonomy(config);
  GoldSegmentation gold = load_gold_segmentation(testing::data_dir() / "segmentation.json");
  GoldCorpus corpus{gold};

  const GoldTableView& view(const std::string& pid, const std::string& tid) const {
    for (const auto& v : corpus.views()) {
      if (v.gold->paper_id == pid && v.gold->table_id == tid) return v;
    }
    throw std::runtime_error("no view " + pid + "/" + tid);
  }
};

const Corpus& corpus() {
  static const Corpus c;
  return c;
}

CellPosition find_cell(const RawTable& t, const std::string& content) {
  for (std::size_t r = 0; r < t.rows(); ++r) {
    for (std::size_t c = 0; c < t.cols(); ++c) {
      if (t.at(r, c).content == content) return {r, c};
    }
  }
  throw std::runtime_error("no cell " + content);
}

bool has_item(const EvidenceSet& ev, const std::string& mention, ContextKind kind) {
  return std::any_of(ev.items().begin(), ev.items().end(),
                     [&](const EvidenceItem& i) { return i.mention == mention && i.context == kind; });
}

TEST(Contexts, HeadlineCellSeesColumnHeaders) {
  const auto& v = corpus().view("headline", "table_01");
  auto seg = gold_segmented_table(v);
  Linker linker(*v.document, *v.index, corpus().taxonomy, corpus().config.noise);
  auto cell = find_cell(*v.table, "48.2");
  auto ctx = linker.contexts(seg, cell);
  auto has = [&](const std::string& s) { return std::find(ctx.table_ctx.begin(), ctx.table_ctx.end(), s) != ctx.table_ctx.end(); };
  EXPECT_TRUE(has("Giga"));
  EXPECT_TRUE(has("R-1"));
  EXPECT_TRUE(has("NMT-2"));
  EXPECT_FALSE(has("R-2"));
  EXPECT_EQ(ctx.caption_ctx, v.table->caption);
  auto ev = linker.evidence(seg, cell);
  EXPECT_TRUE(has_item(ev, "giga", ContextKind::kTable));
  EXPECT_TRUE(has_item(ev, "r-1", ContextKind::kTable));
}

TEST(Contexts, TranslationPaperEvidence) {
  const auto& v = corpus().view("transmt", "table_01");
  auto seg = gold_segmented_table(v);
  Linker linker(*v.document, *v.index, corpus().taxonomy, corpus().config.noise);
  auto ev = linker.evidence(seg, find_cell(*v.table, "41.3"));
  EXPECT_TRUE(has_item(ev, "machine translation", ContextKind::kAbstract));
  EXPECT_TRUE(has_item(ev, "wmt 2014", ContextKind::kMentions));
  EXPECT_TRUE(has_item(ev, "bleu", ContextKind::kCaption));
  EXPECT_TRUE(has_item(ev, "en-fr", ContextKind::kTable));
}

TEST(Contexts, HeadlineCellLinksToRougeOne) {
  const auto& v = corpus().view("headline", "table_01");
  auto seg = gold_segmented_table(v);
  Linker linker(*v.document, *v.index, corpus().taxonomy, corpus().config.noise);
  auto cands = linker.candidates(seg, find_cell(*v.table, "48.2"));
  ASSERT_EQ(cands.size(), corpus().taxonomy.leaderboards().size());
  EXPECT_EQ(cands[0].leaderboard_id, "Summarization | GigaWord | ROUGE-1");
  EXPECT_GT(cands[0].posterior, 0.5);
  EXPECT_DOUBLE_EQ(cands[0].normalized_value, 48.2);
  ASSERT_TRUE(cands[0].model.has_value());
  EXPECT_EQ(cands[0].model->name, "NMT-2");
  EXPECT_EQ(cands[0].model->label, CellLabel::kPaperModel);
  EXPECT_THROW(linker.candidates(seg, find_cell(*v.table, "NMT-2")), Error);
}

Leaderboard with_hint(RangeHint h) {
  Leaderboard l = lb("T", "D", "M");
  l.metric_range_hint = h;
  return l;
}

TEST(NormalizeMetricValue, Examples) {
  EXPECT_DOUBLE_EQ(normalize_metric_value("84.4", with_hint(RangeHint::kFraction)), 0.844);
  EXPECT_DOUBLE_EQ(normalize_metric_value("0.844", with_hint(RangeHint::kFraction)), 0.844);
  EXPECT_DOUBLE_EQ(normalize_metric_value("\\textbf{48.2}", with_hint(RangeHint::kAbsolute)), 48.2);
  EXPECT_DOUBLE_EQ(normalize_metric_value("23.4 ± 0.1", with_hint(RangeHint::kAbsolute)), 23.4);
  EXPECT_DOUBLE_EQ(normalize_metric_value("0.921", with_hint(RangeHint::kPercent)), 92.1);
  EXPECT_DOUBLE_EQ(normalize_metric_value("92.1%", with_hint(RangeHint::kPercent)), 92.1);
  EXPECT_DOUBLE_EQ(normalize_metric_value("92.1", lb("T", "D", "M")), 92.1);
  EXPECT_THROW(normalize_metric_value("n/a", with_hint(RangeHint::kAbsolute)), Error);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12f", v);
  return buf;
}

TEST(NormalizeMetricValue, IdempotentAboveOnePercent) {
  oracle::Rng rng(8);
  std::uniform_int_distribution<int> cents(2, 200000);
  for (RangeHint h : {RangeHint::kPercent, RangeHint::kFraction, RangeHint::kAbsolute}) {
    auto l = with_hint(h);
    for (int i = 0; i < 500; ++i) {
      double v = cents(rng) / 100.0;
      if (h == RangeHint::kPercent && v < 0.02) continue;
      double once = normalize_metric_value(fmt(v), l);
      EXPECT_NEAR(normalize_metric_value(fmt(once), l), once, 1e-9) << v;
    }
  }
}

TEST(NormalizeMetricValue, TinyPercentIsRescaledTwice) {
  auto l = with_hint(RangeHint::kPercent);
  double once = normalize_metric_value("0.005", l);
  EXPECT_DOUBLE_EQ(once, 0.5);
  EXPECT_DOUBLE_EQ(normalize_metric_value(fmt(once), l), 50.0);
}

SegmentedTable labelled(const std::vector<std::vector<CellLabel>>& labels) {
  SegmentedTable seg;
  for (std::size_t r = 0; r < labels.size(); ++r) {
    std::vector<Cell> row;
    for (std::size_t c = 0; c < labels[r].size(); ++c) {
      Cell cell;
      cell.content = "c" + std::to_string(r) + std::to_string(c);
      row.push_back(cell);
    }
    seg.table.grid.push_back(row);
  }
  seg.classes = labels;
  return seg;
}

TEST(AttributeModel, RowFirstThenColumn) {
  constexpr auto P = CellLabel::kPaperModel, C = CellLabel::kCitedModel, N = CellLabel::kNumeric,
                 O = CellLabel::kOther;
  auto seg = labelled({{O, P, O, N, O, C},
                       {P, N, N, N, N, N},
                       {O, N, N, N, N, N},
                       {O, N, O, N, O, N}});
  auto a = attribute_model(seg, {0, 3});
  ASSERT_TRUE(a);
  EXPECT_EQ(a->name, "c01");
  EXPECT_EQ(a->label, CellLabel::kPaperModel);
  auto b = attribute_model(seg, {0, 4});
  ASSERT_TRUE(b);
  EXPECT_EQ(b->name, "c05");
  EXPECT_EQ(b->label, CellLabel::kCitedModel);
  auto c = attribute_model(seg, {1, 4});
  ASSERT_TRUE(c);
  EXPECT_EQ(c->name, "c10");
  auto d = attribute_model(seg, {2, 1});
  ASSERT_TRUE(d);
  EXPECT_EQ(d->name, "c01");
  EXPECT_EQ((d->position), (CellPosition{0, 1}));
  EXPECT_FALSE(attribute_model(seg, {3, 2}).has_value());
}

}  // namespace
}  // namespace axtract
