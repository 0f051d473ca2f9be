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


#include "axtract/text_index.hpp"

#include <algorithm>
#include <cmath>
#include <regex>
#include <set>

#include "axtract/error.hpp"
#include "axtract/text.hpp"
#include "json.hpp"

namespace axtract {

namespace {

void append_windows(const std::string& paper_id, const std::string& heading,
                    const std::string& body, const FragmentOptions& options,
                    std::vector<Fragment>& out) {
  std::string window;
  std::size_t tokens = 0;
  std::size_t sentences = 0;
  auto flush = [&] {
    if (!window.empty()) {
      Fragment f;
      f.paper_id = paper_id;
      f.section_heading = heading;
      f.text = std::move(window);
      f.order = out.size();
      f.fragment_id = paper_id + "#" + std::to_string(f.order);
      out.push_back(std::move(f));
    }
    window.clear();
    tokens = 0;
    sentences = 0;
  };
  for (const auto& sentence : text::split_sentences(body)) {
    std::size_t n = text::tokenize(sentence).size();
    if (n == 0) continue;
    if (n > options.max_tokens) {
      // Oversized sentence: cut on word boundaries.
      flush();
      std::string piece;
      std::size_t count = 0;
      for (const auto& word : text::split(sentence, ' ')) {
        std::size_t w = text::tokenize(word).size();
        if (count + w > options.max_tokens && !piece.empty()) {
          window = std::move(piece);
          flush();
          piece.clear();
          count = 0;
        }
        if (!piece.empty()) piece += ' ';
        piece += word;
        count += w;
      }
      window = std::move(piece);
      flush();
      continue;
    }
    if (tokens + n > options.max_tokens || sentences >= options.max_sentences) flush();
    if (!window.empty()) window += ' ';
    window += sentence;
    tokens += n;
    ++sentences;
  }
  flush();
}

}  // namespace

std::vector<Fragment> make_fragments(const PaperDocument& doc, const FragmentOptions& options) {
  std::vector<Fragment> out;
  if (!doc.abstract.empty()) append_windows(doc.paper_id, "Abstract", doc.abstract, options, out);
  for (const auto& s : doc.sections) append_windows(doc.paper_id, s.heading, s.body, options, out);
  for (const auto& r : doc.references) {
    append_windows(doc.paper_id, "References", r.text, FragmentOptions{options.max_tokens, 1000},
                   out);
  }
  return out;
}

FragmentIndex::FragmentIndex(std::vector<Fragment> fragments, Bm25Params params)
    : fragments_(std::move(fragments)), params_(params) {
  if (!(params_.k1 > 0.0) || params_.b < 0.0 || params_.b > 1.0) {
    throw Error(ErrorCode::kInvalidConfig, "BM25 requires k1 > 0 and 0 <= b <= 1");
  }
  doc_lengths_.reserve(fragments_.size());
  std::size_t total = 0;
  for (std::size_t i = 0; i < fragments_.size(); ++i) {
    auto tokens = text::tokenize(fragments_[i].text);
    doc_lengths_.push_back(tokens.size());
    total += tokens.size();
    std::map<std::string, std::size_t> tf;
    for (auto& t : tokens) ++tf[t];
    for (auto& [term, n] : tf) postings_[term].push_back({i, n});
  }
  avg_doc_length_ =
      fragments_.empty() ? 0.0 : static_cast<double>(total) / static_cast<double>(fragments_.size());
}

double FragmentIndex::idf(const std::string& term) const {
  auto it = postings_.find(term);
  const double df = it == postings_.end() ? 0.0 : static_cast<double>(it->second.size());
  const double n = static_cast<double>(fragments_.size());
  return std::log(1.0 + (n - df + 0.5) / (df + 0.5));
}

std::vector<SearchHit> FragmentIndex::search(std::string_view query, std::size_t k) const {
  std::vector<SearchHit> hits;
  if (k == 0 || fragments_.empty()) return hits;
  auto terms = text::tokenize(query);
  std::set<std::string> unique(terms.begin(), terms.end());
  std::vector<double> scores(fragments_.size(), 0.0);
  std::vector<bool> matched(fragments_.size(), false);
  for (const auto& term : unique) {
    auto it = postings_.find(term);
    if (it == postings_.end()) continue;
    const double w = idf(term);
    for (const auto& p : it->second) {
      const double tf = static_cast<double>(p.term_frequency);
      const double norm = 1.0 - params_.b +
                          params_.b * static_cast<double>(doc_lengths_[p.fragment]) / avg_doc_length_;
      scores[p.fragment] += w * tf * (params_.k1 + 1.0) / (tf + params_.k1 * norm);
      matched[p.fragment] = true;
    }
  }
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (matched[i] && scores[i] > 0.0) order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  if (order.size() > k) order.resize(k);
  for (auto i : order) hits.push_back({&fragments_[i], scores[i]});
  return hits;
}

std::string FragmentIndex::dump_json() const {
  nlohmann::ordered_json j;
  j["k1"] = params_.k1;
  j["b"] = params_.b;
  j["avg_doc_length"] = avg_doc_length_;
  auto& frags = j["fragments"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < fragments_.size(); ++i) {
    frags.push_back({{"fragment_id", fragments_[i].fragment_id},
                     {"section", fragments_[i].section_heading},
                     {"length", doc_lengths_[i]},
                     {"text", fragments_[i].text}});
  }
  auto& post = j["postings"] = nlohmann::ordered_json::object();
  for (const auto& [term, list] : postings_) {
    auto& arr = post[term] = nlohmann::ordered_json::array();
    for (const auto& p : list) arr.push_back({fragments_[p.fragment].fragment_id, p.term_frequency});
  }
  return j.dump(2);
}

FragmentIndex build_index(const PaperDocument& doc, Bm25Params params,
                          const FragmentOptions& options) {
  return FragmentIndex(make_fragments(doc, options), params);
}

namespace {

bool refers_to(const std::string& text_value, int ordinal, const std::string& label) {
  if (!label.empty() && text_value.find(label) != std::string::npos) return true;
  if (ordinal <= 0) return false;
  static const std::regex pattern(R"((?:\btables?|\btab\.)\s*((?:\d+[a-z]?)(?:\s*(?:,|and|&|-|to)\s*\d+[a-z]?)*))",
                                  std::regex::icase);
  const std::string wanted = std::to_string(ordinal);
  for (std::sregex_iterator it(text_value.begin(), text_value.end(), pattern), end; it != end; ++it) {
    static const std::regex number(R"(\d+)");
    std::string list = (*it)[1].str();
    for (std::sregex_iterator n(list.begin(), list.end(), number), e; n != e; ++n) {
      if (n->str() == wanted) return true;
    }
  }
  return false;
}

}  // namespace

std::vector<Fragment> find_table_mentions(const FragmentIndex& index, const RawTable& table,
                                          std::size_t k) {
  std::vector<Fragment> out;
  if (!table.float_label || k == 0) return out;
  for (const auto& f : index.fragments()) {
    if (f.section_heading == "References") continue;
    if (refers_to(f.text, table.ordinal, *table.float_label)) {
      out.push_back(f);
      if (out.size() >= k) break;
    }
  }
  return out;
}

std::vector<Fragment> find_table_mentions(const PaperDocument& doc, const RawTable& table,
                                          std::size_t k) {
  return find_table_mentions(FragmentIndex(make_fragments(doc)), table, k);
}

}  // namespace axtract
