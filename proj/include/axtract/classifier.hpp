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

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "axtract/source.hpp"

namespace axtract {

struct LabeledExample {
  std::map<std::string, std::string> text_fields;
  std::map<std::string, std::string> categorical_fields;
  std::string label;
};

struct LabelDistribution {
  std::map<std::string, double> scores;

  const std::string& argmax() const;
  double operator[](const std::string& label) const;
};

struct TrainConfig {
  // Declared label set; every label needs at least one example unless
  // allow_degenerate is set. Empty means "labels seen in the examples".
  std::vector<std::string> labels;
  double alpha = 1.0;
  // Per-field multiplier on log-likelihood contributions (default 1).
  std::map<std::string, double> field_weights;
  // Missing classes are dropped from the model instead of raising EmptyClass.
  bool allow_degenerate = false;
};

// Multinomial naive Bayes over unigram counts per text field, plus one-hot
// categorical features, with additive smoothing. All statistics are integer
// counts, so training is independent of example order and a saved model
// reproduces identical scores.
class ClassifierModel {
 public:
  static constexpr int kFormatVersion = 1;

  const std::vector<std::string>& labels() const { return labels_; }
  double alpha() const { return alpha_; }

  LabelDistribution predict(const LabeledExample& example) const;

  // Smoothed P(token | label) for a text field; exposed for inspection.
  double token_likelihood(const std::string& field, const std::string& token,
                          const std::string& label) const;

  std::string to_json() const;
  static ClassifierModel from_json(const std::string& json);
  void save(const std::string& path) const;
  static ClassifierModel load(const std::string& path);

  friend ClassifierModel train(const std::vector<LabeledExample>& examples,
                               const TrainConfig& config);
  friend bool operator==(const ClassifierModel&, const ClassifierModel&) = default;

 private:
  struct FieldStats {
    // label -> token -> count
    std::map<std::string, std::map<std::string, std::uint64_t>> counts;
    std::map<std::string, std::uint64_t> totals;
    std::uint64_t vocabulary = 0;

    friend bool operator==(const FieldStats&, const FieldStats&) = default;
  };
  struct CategoricalStats {
    std::map<std::string, std::map<std::string, std::uint64_t>> counts;
    std::uint64_t cardinality = 0;

    friend bool operator==(const CategoricalStats&, const CategoricalStats&) = default;
  };

  std::vector<std::string> labels_;
  std::map<std::string, std::uint64_t> class_counts_;
  std::uint64_t total_examples_ = 0;
  double alpha_ = 1.0;
  std::map<std::string, double> field_weights_;
  std::map<std::string, FieldStats> text_stats_;
  std::map<std::string, CategoricalStats> categorical_stats_;
};

// Throws Error{kEmptyClass} when a declared label has no examples.
ClassifierModel train(const std::vector<LabeledExample>& examples, const TrainConfig& config = {});

inline LabelDistribution predict(const ClassifierModel& model, const LabeledExample& example) {
  return model.predict(example);
}

// Inputs for one table cell, mirroring the segmentation feature list.
struct CellBundle {
  const RawTable* table = nullptr;
  std::size_t row = 0;
  std::size_t col = 0;
  // Masked evidence fragments retrieved for the cell content.
  std::vector<std::string> masked_mentions;
};

inline constexpr const char* kSeparatorToken = "<sep>";

// Builds the example for a cell: is-emphasised and position/header flags as
// categorical features; cell style, masked mention text, content, row and
// column context and reference keys as text fields.
LabeledExample featurize(const CellBundle& bundle);

// "a <sep> b <sep> c <sep>"
std::string join_context(const std::vector<std::string>& cells);

}  // namespace axtract
