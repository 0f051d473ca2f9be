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
#include <set>

#include "json.hpp"

#include "axtract/text.hpp"
#include "axtract/text_index.hpp"
#include "oracles.hpp"
#include "support.hpp"

namespace axtract {
namespace {

std::vector<Fragment> fragments_of(const std::vector<std::string>& texts) {
  std::vector<Fragment> out;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    out.push_back({"f" + std::to_string(i), "p", "", texts[i], i});
  }
  return out;
}

TEST(Bm25, EmptyDocumentHasNoFragments) {
  PaperDocument doc;
  auto index = build_index(doc);
  EXPECT_TRUE(index.fragments().empty());
  EXPECT_TRUE(index.search("anything", 5).empty());
}

TEST(Bm25, EmptyQueryYieldsNothing) {
  FragmentIndex index(fragments_of({"a b"}));
  EXPECT_TRUE(index.search("", 3).empty());
  EXPECT_TRUE(index.search(" ,, ", 3).empty());
}

TEST(Bm25, ContainingFragmentRanksFirst) {
  FragmentIndex index(fragments_of({"we report bleu", "we report perplexity"}));
  auto hits = index.search("perplexity", 2);
  ASSERT_EQ(hits.size(), 1u);
  EXPECT_EQ(hits[0].fragment->fragment_id, "f1");
}

// Values computed by hand from the closed form with k1 = 1.2, b = 0.75 over
// the fragments "a b", "a c c", "d" (avgdl = 2).
TEST(Bm25, HandComputedScores) {
  FragmentIndex index(fragments_of({"a b", "a c c", "d"}), {1.2, 0.75});
  EXPECT_DOUBLE_EQ(index.avg_doc_length(), 2.0);
  auto c = index.search("c", 3);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_NEAR(c[0].score, 1.1823695104798893, 1e-12);
  auto a = index.search("a", 3);
  ASSERT_EQ(a.size(), 2u);
  EXPECT_EQ(a[0].fragment->order, 0u);
  EXPECT_NEAR(a[0].score, 0.47000362924573563, 1e-12);
  EXPECT_NEAR(a[1].score, 0.39019169220400696, 1e-12);
  auto ac = index.search("a c", 3);
  EXPECT_EQ(ac[0].fragment->order, 1u);
  EXPECT_NEAR(ac[0].score, 1.5725612026838962, 1e-12);
}

TEST(Bm25, TiesKeepFragmentOrder) {
  FragmentIndex index(fragments_of({"x y", "z z", "x y", "x y"}));
  auto hits = index.search("x", 10);
  ASSERT_EQ(hits.size(), 3u);
  EXPECT_EQ(hits[0].fragment->order, 0u);
  EXPECT_EQ(hits[1].fragment->order, 2u);
  EXPECT_EQ(hits[2].fragment->order, 3u);
  EXPECT_EQ(index.search("x", 2).size(), 2u);
}

TEST(Bm25, CompoundTermsIndexedWhole) {
  auto doc = testing::ingest_tex("p", "\\documentclass{article}\\begin{document}\\section{E}On TREC-6, ULMFiT "
                                      "significantly improves upon training from scratch.\\end{document}");
  auto index = build_index(doc);
  EXPECT_TRUE(index.postings().contains("trec-6"));
  EXPECT_FALSE(index.postings().contains("trec"));
}

TEST(Bm25, NmtQueryFindsHeadlineSentence) {
  auto doc = testing::ingest_tex("p", "\\documentclass{article}\\begin{document}\\section{E}Results on Giga Word "
                                      "dataset show gains. Compared to \\textbf{NMT-1} the bigger model wins. "
                                      "Other text here.\\end{document}");
  auto index = build_index(doc, {}, {300, 1});
  auto hits = index.search("NMT-1", 5);
  ASSERT_EQ(hits.size(), 1u);
  EXPECT_NE(hits[0].fragment->text.find("NMT-1"), std::string::npos);
}

TEST(Bm25, PostingsMatchBruteForceCounts) {
  for (const auto& path : testing::minicorpus_sources()) {
    auto index = build_index(ingest(load_bundle(path)).document);
    std::map<std::string, std::map<std::size_t, std::size_t>> counts;
    double total = 0;
    for (std::size_t i = 0; i < index.fragments().size(); ++i) {
      auto toks = text::tokenize(index.fragments()[i].text);
      EXPECT_EQ(index.doc_lengths()[i], toks.size());
      total += static_cast<double>(toks.size());
      for (const auto& t : toks) ++counts[t][i];
    }
    EXPECT_NEAR(index.avg_doc_length(), total / static_cast<double>(index.fragments().size()), 1e-12);
    ASSERT_EQ(index.postings().size(), counts.size());
    for (const auto& [term, postings] : index.postings()) {
      ASSERT_EQ(postings.size(), counts[term].size()) << term;
      for (const auto& p : postings) EXPECT_EQ(p.term_frequency, counts[term][p.fragment]) << term;
    }
  }
}

TEST(Bm25, FragmentsRespectWindowLimits) {
  for (const auto& path : testing::minicorpus_sources()) {
    auto doc = ingest(load_bundle(path)).document;
    auto frags = make_fragments(doc, {12, 2});
    std::set<std::size_t> orders;
    for (const auto& f : frags) {
      EXPECT_FALSE(f.text.empty());
      EXPECT_LE(text::tokenize(f.text).size(), 12u) << f.text;
      EXPECT_TRUE(orders.insert(f.order).second);
    }
  }
}

TEST(Bm25, MatchesNaiveScorerOnRandomCorpora) {
  oracle::Rng rng(7);
  const std::vector<std::string> vocab = {"a", "b", "c", "d", "e", "f", "g", "h"};
  std::uniform_int_distribution<std::size_t> nfrag(1, 50), len(1, 12), word(0, vocab.size() - 1), qlen(1, 3);
  std::uniform_real_distribution<double> k1(0.1, 3.0), b(0.0, 1.0);
  for (int round = 0; round < 100; ++round) {
    std::vector<std::string> texts;
    std::vector<std::vector<std::string>> docs;
    std::size_t n = nfrag(rng);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::string> d;
      std::size_t l = len(rng);
      for (std::size_t j = 0; j < l; ++j) d.push_back(vocab[word(rng)]);
      texts.push_back(text::join(d, " "));
      docs.push_back(d);
    }
    Bm25Params params{k1(rng), b(rng)};
    FragmentIndex index(fragments_of(texts), params);
    for (int q = 0; q < 5; ++q) {
      std::vector<std::string> query;
      std::size_t ql = qlen(rng);
      for (std::size_t j = 0; j < ql; ++j) query.push_back(vocab[word(rng)]);
      auto hits = index.search(text::join(query, " "), n);
      std::vector<std::pair<double, std::size_t>> expected;
      for (std::size_t i = 0; i < n; ++i) {
        double s = oracle::naive_bm25(docs, query, i, params.k1, params.b);
        if (s > 0) expected.emplace_back(s, i);
      }
      ASSERT_EQ(hits.size(), expected.size());
      for (const auto& h : hits) {
        EXPECT_NEAR(h.score, oracle::naive_bm25(docs, query, h.fragment->order, params.k1, params.b), 1e-9);
      }
      for (std::size_t i = 1; i < hits.size(); ++i) {
        EXPECT_TRUE(hits[i - 1].score > hits[i].score ||
                    (hits[i - 1].score == hits[i].score && hits[i - 1].fragment->order < hits[i].fragment->order));
      }
    }
  }
}

TEST(TableMentions, OrdinalReferenceFound) {
  auto doc = testing::ingest_tex("p", R"(\documentclass{article}\begin{document}
\section{R}
Table~\ref{tab:two} presents the main results.

Nothing relevant here.

Tables 1 and 2 are both useful.
\begin{table}\caption{First}\label{tab:one}\begin{tabular}{c}a\end{tabular}\end{table}
\begin{table}\caption{Second}\label{tab:two}\begin{tabular}{c}b\end{tabular}\end{table}
\begin{tabular}{c}c\end{tabular}
\end{document})");
  ASSERT_EQ(doc.tables.size(), 3u);
  auto index = build_index(doc, {}, {300, 1});
  auto second = find_table_mentions(index, doc.tables[1], 10);
  ASSERT_EQ(second.size(), 2u);
  EXPECT_TRUE(second[0].text.starts_with("Table 2 presents"));
  EXPECT_TRUE(second[1].text.starts_with("Tables 1 and 2"));
  auto first = find_table_mentions(index, doc.tables[0], 10);
  ASSERT_EQ(first.size(), 1u);
  EXPECT_TRUE(first[0].text.starts_with("Tables 1 and 2"));
  EXPECT_TRUE(find_table_mentions(index, doc.tables[2], 10).empty());
  EXPECT_EQ(find_table_mentions(doc, doc.tables[1], 1).size(), 1u);
}

TEST(TableMentions, TableTwelveIsNotTableOne) {
  auto doc = testing::ingest_tex("p", R"(\documentclass{article}\begin{document}
\section{R}
See Table 12 for details.
\begin{table}\caption{First}\label{tab:one}\begin{tabular}{c}a\end{tabular}\end{table}
\end{document})");
  EXPECT_TRUE(find_table_mentions(doc, doc.tables.at(0), 10).empty());
}

TEST(TableMentions, MiniCorpusMentionsMatchManualReading) {
  auto doc = ingest(load_bundle(testing::data_dir() / "papers" / "headline")).document;
  auto index = build_index(doc);
  auto main = find_table_mentions(index, doc.tables.at(0), 10);
  ASSERT_EQ(main.size(), 1u);
  EXPECT_NE(main[0].text.find("Table 1 presents the test set results."), std::string::npos);
  auto ablation = find_table_mentions(index, doc.tables.at(1), 10);
  ASSERT_EQ(ablation.size(), 1u);
  EXPECT_NE(ablation[0].text.find("Table 2 shows an ablation study"), std::string::npos);
}

TEST(IndexDump, IsValidJsonWithEveryFragment) {
  auto index = build_index(ingest(load_bundle(testing::data_dir() / "papers" / "ulmtext")).document);
  auto j = nlohmann::json::parse(index.dump_json());
  EXPECT_EQ(j.at("fragments").size(), index.fragments().size());
}

}  // namespace
}  // namespace axtract
