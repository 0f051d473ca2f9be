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

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "axtract/source.hpp"

namespace axtract {

struct Fragment {
  std::string fragment_id;
  std::string paper_id;
  std::string section_heading;
  std::string text;
  std::size_t order = 0;

  friend bool operator==(const Fragment&, const Fragment&) = default;
};

struct FragmentOptions {
  std::size_t max_tokens = 300;
  std::size_t max_sentences = 2;
};

struct Bm25Params {
  double k1 = 1.2;
  double b = 0.75;
};

// Splits abstract, section bodies and references into sentence windows.
std::vector<Fragment> make_fragments(const PaperDocument& doc, const FragmentOptions& options = {});

struct Posting {
  std::size_t fragment = 0;  // index into fragments()
  std::size_t term_frequency = 0;
};

struct SearchHit {
  const Fragment* fragment = nullptr;
  double score = 0.0;
};

// Per-paper BM25 index over fragments. Immutable after construction.
//
// score(q, d) = sum over distinct query terms t present in d of
//   idf(t) * tf * (k1 + 1) / (tf + k1 * (1 - b + b * |d| / avgdl))
// with idf(t) = ln(1 + (N - df + 0.5) / (df + 0.5)), which is never negative.
class FragmentIndex {
 public:
  FragmentIndex() = default;
  explicit FragmentIndex(std::vector<Fragment> fragments, Bm25Params params = {});

  // At most k fragments with a positive score, best first; ties keep fragment
  // order. An empty query yields no hits.
  std::vector<SearchHit> search(std::string_view query, std::size_t k) const;

  const std::vector<Fragment>& fragments() const { return fragments_; }
  const std::map<std::string, std::vector<Posting>>& postings() const { return postings_; }
  const std::vector<std::size_t>& doc_lengths() const { return doc_lengths_; }
  double avg_doc_length() const { return avg_doc_length_; }
  const Bm25Params& params() const { return params_; }
  double idf(const std::string& term) const;

  std::string dump_json() const;

 private:
  std::vector<Fragment> fragments_;
  std::map<std::string, std::vector<Posting>> postings_;
  std::vector<std::size_t> doc_lengths_;
  double avg_doc_length_ = 0.0;
  Bm25Params params_;
};

FragmentIndex build_index(const PaperDocument& doc, Bm25Params params = {},
                          const FragmentOptions& options = {});

// Fragments whose text refers to the table by number ("Table 2", "Tab. 2",
// "Tables 1 and 2") or by its raw label key. Tables without a float label
// have no mentions. Results keep fragment order, at most k.
std::vector<Fragment> find_table_mentions(const FragmentIndex& index, const RawTable& table,
                                          std::size_t k);
std::vector<Fragment> find_table_mentions(const PaperDocument& doc, const RawTable& table,
                                          std::size_t k);

}  // namespace axtract
