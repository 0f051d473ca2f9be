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


#include "axtract/classifier.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "axtract/error.hpp"
#include "axtract/text.hpp"
#include "json.hpp"

namespace axtract {

using nlohmann::json;

const std::string& LabelDistribution::argmax() const {
  static const std::string kNone;
  const std::string* best = &kNone;
  double best_score = -1.0;
  for (const auto& [label, p] : scores) {
    if (p > best_score) {
      best = &label;
      best_score = p;
    }
  }
  return *best;
}

double LabelDistribution::operator[](const std::string& label) const {
  auto it = scores.find(label);
  return it == scores.end() ? 0.0 : it->second;
}

ClassifierModel train(const std::vector<LabeledExample>& examples, const TrainConfig& config) {
  if (!(config.alpha > 0.0)) throw Error(ErrorCode::kInvalidConfig, "smoothing alpha must be > 0");
  ClassifierModel model;
  model.alpha_ = config.alpha;
  model.field_weights_ = config.field_weights;

  std::set<std::string> seen;
  for (const auto& ex : examples) seen.insert(ex.label);
  std::vector<std::string> declared = config.labels;
  if (declared.empty()) declared.assign(seen.begin(), seen.end());
  std::set<std::string> declared_set(declared.begin(), declared.end());
  for (const auto& label : seen) {
    if (!declared_set.contains(label)) {
      throw Error(ErrorCode::kInvalidConfig, "example label '" + label + "' is not declared");
    }
  }
  for (const auto& label : declared) {
    if (seen.contains(label)) {
      model.labels_.push_back(label);
    } else if (!config.allow_degenerate) {
      throw Error(ErrorCode::kEmptyClass, "no training examples for class '" + label + "'");
    }
  }
  if (model.labels_.empty()) throw Error(ErrorCode::kEmptyClass, "no training examples");

  std::map<std::string, std::set<std::string>> vocab;
  std::map<std::string, std::set<std::string>> values;
  for (const auto& ex : examples) {
    ++model.class_counts_[ex.label];
    ++model.total_examples_;
    for (const auto& [field, value] : ex.text_fields) {
      auto& stats = model.text_stats_[field];
      auto& counts = stats.counts[ex.label];
      for (auto& tok : text::tokenize(value)) {
        ++counts[tok];
        ++stats.totals[ex.label];
        vocab[field].insert(tok);
      }
    }
    for (const auto& [field, value] : ex.categorical_fields) {
      ++model.categorical_stats_[field].counts[ex.label][value];
      values[field].insert(value);
    }
  }
  for (auto& [field, stats] : model.text_stats_) stats.vocabulary = vocab[field].size();
  for (auto& [field, stats] : model.categorical_stats_) stats.cardinality = values[field].size();
  return model;
}

double ClassifierModel::token_likelihood(const std::string& field, const std::string& token,
                                         const std::string& label) const {
  auto fs = text_stats_.find(field);
  if (fs == text_stats_.end() || fs->second.vocabulary == 0) return 0.0;
  const auto& stats = fs->second;
  std::uint64_t count = 0;
  if (auto c = stats.counts.find(label); c != stats.counts.end()) {
    if (auto t = c->second.find(token); t != c->second.end()) count = t->second;
  }
  std::uint64_t total = 0;
  if (auto t = stats.totals.find(label); t != stats.totals.end()) total = t->second;
  return (static_cast<double>(count) + alpha_) /
         (static_cast<double>(total) + alpha_ * static_cast<double>(stats.vocabulary));
}

LabelDistribution ClassifierModel::predict(const LabeledExample& example) const {
  std::map<std::string, double> log_scores;
  for (const auto& label : labels_) {
    double lp = std::log(static_cast<double>(class_counts_.at(label)) /
                         static_cast<double>(total_examples_));
    for (const auto& [field, value] : example.text_fields) {
      auto fs = text_stats_.find(field);
      if (fs == text_stats_.end() || fs->second.vocabulary == 0) continue;
      double w = 1.0;
      if (auto it = field_weights_.find(field); it != field_weights_.end()) w = it->second;
      for (const auto& tok : text::tokenize(value)) {
        lp += w * std::log(token_likelihood(field, tok, label));
      }
    }
    for (const auto& [field, value] : example.categorical_fields) {
      auto cs = categorical_stats_.find(field);
      if (cs == categorical_stats_.end()) continue;
      double w = 1.0;
      if (auto it = field_weights_.find(field); it != field_weights_.end()) w = it->second;
      std::uint64_t count = 0;
      if (auto c = cs->second.counts.find(label); c != cs->second.counts.end()) {
        if (auto v = c->second.find(value); v != c->second.end()) count = v->second;
      }
      double p = (static_cast<double>(count) + alpha_) /
                 (static_cast<double>(class_counts_.at(label)) +
                  alpha_ * static_cast<double>(cs->second.cardinality + 1));
      lp += w * std::log(p);
    }
    log_scores[label] = lp;
  }
  double max_lp = -std::numeric_limits<double>::infinity();
  for (const auto& [_, lp] : log_scores) max_lp = std::max(max_lp, lp);
  double z = 0.0;
  for (const auto& [_, lp] : log_scores) z += std::exp(lp - max_lp);
  LabelDistribution dist;
  for (const auto& [label, lp] : log_scores) dist.scores[label] = std::exp(lp - max_lp) / z;
  return dist;
}

std::string ClassifierModel::to_json() const {
  json j;
  j["format"] = "axtract-naive-bayes";
  j["version"] = kFormatVersion;
  j["labels"] = labels_;
  j["class_counts"] = class_counts_;
  j["total_examples"] = total_examples_;
  j["alpha"] = alpha_;
  j["field_weights"] = field_weights_;
  json text = json::object();
  for (const auto& [field, s] : text_stats_) {
    text[field] = {{"counts", s.counts}, {"totals", s.totals}, {"vocabulary", s.vocabulary}};
  }
  j["text_fields"] = text;
  json cat = json::object();
  for (const auto& [field, s] : categorical_stats_) {
    cat[field] = {{"counts", s.counts}, {"cardinality", s.cardinality}};
  }
  j["categorical_fields"] = cat;
  return j.dump();
}

ClassifierModel ClassifierModel::from_json(const std::string& data) {
  ClassifierModel m;
  try {
    json j = json::parse(data);
    if (j.at("format") != "axtract-naive-bayes") {
      throw Error(ErrorCode::kMalformedModel, "unexpected model format");
    }
    if (j.at("version").get<int>() != kFormatVersion) {
      throw Error(ErrorCode::kMalformedModel, "unsupported model version");
    }
    m.labels_ = j.at("labels").get<std::vector<std::string>>();
    m.class_counts_ = j.at("class_counts").get<std::map<std::string, std::uint64_t>>();
    m.total_examples_ = j.at("total_examples").get<std::uint64_t>();
    m.alpha_ = j.at("alpha").get<double>();
    m.field_weights_ = j.at("field_weights").get<std::map<std::string, double>>();
    for (const auto& [field, s] : j.at("text_fields").items()) {
      FieldStats fs;
      fs.counts = s.at("counts").get<decltype(fs.counts)>();
      fs.totals = s.at("totals").get<decltype(fs.totals)>();
      fs.vocabulary = s.at("vocabulary").get<std::uint64_t>();
      m.text_stats_[field] = std::move(fs);
    }
    for (const auto& [field, s] : j.at("categorical_fields").items()) {
      CategoricalStats cs;
      cs.counts = s.at("counts").get<decltype(cs.counts)>();
      cs.cardinality = s.at("cardinality").get<std::uint64_t>();
      m.categorical_stats_[field] = std::move(cs);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedModel, e.what());
  }
  for (const auto& label : m.labels_) {
    if (!m.class_counts_.contains(label) || m.class_counts_.at(label) == 0) {
      throw Error(ErrorCode::kMalformedModel, "label without examples: " + label);
    }
  }
  return m;
}

void ClassifierModel::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out << to_json() << '\n';
}

ClassifierModel ClassifierModel::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

std::string join_context(const std::vector<std::string>& cells) {
  std::string out;
  for (const auto& c : cells) {
    out += c;
    out += ' ';
    out += kSeparatorToken;
    out += ' ';
  }
  if (!out.empty()) out.pop_back();
  return out;
}

LabeledExample featurize(const CellBundle& bundle) {
  LabeledExample ex;
  const RawTable& t = *bundle.table;
  const Cell& cell = t.at(bundle.row, bundle.col);
  std::vector<std::string> row_cells;
  for (const auto& c : t.grid[bundle.row]) row_cells.push_back(c.content);
  std::vector<std::string> col_cells;
  for (const auto& r : t.grid) col_cells.push_back(r[bundle.col].content);

  std::string mentions;
  for (std::size_t i = 0; i < bundle.masked_mentions.size(); ++i) {
    if (i) mentions += std::string(" ") + kSeparatorToken + " ";
    mentions += bundle.masked_mentions[i];
  }
  ex.text_fields["cell_content"] = cell.content;
  ex.text_fields["cell_style"] = text::join(cell.style, " ");
  ex.text_fields["text"] = mentions;
  ex.text_fields["row_context"] = join_context(row_cells);
  ex.text_fields["column_context"] = join_context(col_cells);
  ex.text_fields["cell_reference"] = text::join(cell.reference_keys, ", ");
  if (cell.content.empty()) {
    for (auto& [_, v] : ex.text_fields) v.clear();
  }

  ex.categorical_fields["is_emphasised"] = cell.is_emphasised ? "true" : "false";
  ex.categorical_fields["is_header"] = cell.is_header ? "true" : "false";
  ex.categorical_fields["has_reference"] = cell.reference_keys.empty() ? "false" : "true";
  ex.categorical_fields["row_position"] =
      bundle.row == 0 ? "first" : bundle.row + 1 == t.rows() ? "last" : "middle";
  ex.categorical_fields["column_position"] =
      bundle.col == 0 ? "first" : bundle.col + 1 == t.cols() ? "last" : "middle";
  return ex;
}

}  // namespace axtract
