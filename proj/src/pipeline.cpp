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


#include "axtract/pipeline.hpp"

#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

#include "axtract/error.hpp"
#include "axtract/numeric.hpp"
#include "axtract/text.hpp"
#include "json.hpp"

namespace axtract {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

double number_in(const json& j, const char* key, double fallback, double lo, double hi) {
  if (!j.contains(key)) return fallback;
  double v = j.at(key).get<double>();
  if (!(v >= lo && v <= hi)) {
    throw Error(ErrorCode::kInvalidConfig, std::string(key) + " must lie in [" + std::to_string(lo) + ", " +
                                               std::to_string(hi) + "]");
  }
  return v;
}

}  // namespace

PipelineConfig parse_config(std::string_view data, const fs::path& base_dir) {
  PipelineConfig cfg;
  try {
    json j = json::parse(data);
    if (!j.is_object()) throw Error(ErrorCode::kInvalidConfig, "config must be a JSON object");
    auto path_of = [&](const json& v) { return base_dir / v.get<std::string>(); };
    cfg.taxonomy = path_of(j.at("taxonomy"));
    if (j.contains("evidence")) {
      const auto& e = j.at("evidence");
      cfg.strategy = parse_strategy(e.value("strategy", "bow"));
      if (e.contains("curated")) cfg.curated = path_of(e.at("curated"));
      if (e.contains("abbreviations")) cfg.abbreviations = path_of(e.at("abbreviations"));
    }
    if (j.contains("models")) {
      const auto& m = j.at("models");
      if (m.contains("table_type")) cfg.table_type_model = path_of(m.at("table_type"));
      if (m.contains("segmenter")) cfg.segmenter_model = path_of(m.at("segmenter"));
    }
    if (j.contains("thresholds")) {
      const auto& t = j.at("thresholds");
      cfg.thresholds.t1 = number_in(t, "t1", cfg.thresholds.t1, 0.0, 1.0);
      cfg.thresholds.t2 = number_in(t, "t2", cfg.thresholds.t2, 0.0, 1.0);
      cfg.table_type_threshold = number_in(t, "table_type", cfg.table_type_threshold, 0.0, 1.0);
    }
    if (j.contains("noise")) {
      const auto& n = j.at("noise");
      if (n.contains("noise_prob")) {
        for (const auto& [k, v] : n.at("noise_prob").items()) cfg.noise.noise_prob[parse_context_kind(k)] = v.get<double>();
      }
      if (n.contains("entity_given_noise")) {
        for (const auto& [k, v] : n.at("entity_given_noise").items()) {
          EntityType t;
          try {
            t = parse_entity_type(k);
          } catch (const Error&) {
            throw Error(ErrorCode::kInvalidConfig, "unknown entity type '" + k + "'");
          }
          cfg.noise.entity_given_noise[t] = v.get<double>();
        }
      }
    }
    if (j.contains("bm25")) {
      const auto& b = j.at("bm25");
      cfg.bm25.k1 = number_in(b, "k1", cfg.bm25.k1, 1e-9, 1e9);
      cfg.bm25.b = number_in(b, "b", cfg.bm25.b, 0.0, 1.0);
    }
    if (j.contains("evidence_depth")) {
      long k = j.at("evidence_depth").get<long>();
      if (k < 0) throw Error(ErrorCode::kInvalidConfig, "evidence_depth must be >= 0");
      cfg.evidence_depth = static_cast<std::size_t>(k);
    }
    if (j.contains("fragments")) {
      const auto& f = j.at("fragments");
      cfg.fragments.max_tokens = f.value("max_tokens", cfg.fragments.max_tokens);
      cfg.fragments.max_sentences = f.value("max_sentences", cfg.fragments.max_sentences);
      if (cfg.fragments.max_tokens == 0 || cfg.fragments.max_sentences == 0) {
        throw Error(ErrorCode::kInvalidConfig, "fragment limits must be positive");
      }
    }
    if (j.contains("macros")) {
      for (const auto& [name, def] : j.at("macros").items()) {
        MacroDefinition m;
        if (def.is_string()) {
          m.body = def.get<std::string>();
        } else {
          m.num_args = def.value("args", 0);
          m.body = def.at("body").get<std::string>();
        }
        if (m.num_args < 0 || m.num_args > 1) {
          throw Error(ErrorCode::kInvalidConfig, "macro '" + name + "' must take zero or one argument");
        }
        cfg.ingest.macros[name] = m;
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig, e.what());
  }
  cfg.noise.validate();
  return cfg;
}

PipelineConfig load_config(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kInvalidConfig, "cannot read config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  PipelineConfig cfg = parse_config(ss.str(), path.parent_path());
  validate(cfg);
  return cfg;
}

void validate(const PipelineConfig& cfg) {
  auto must_exist = [](const fs::path& p, const std::string& what) {
    if (!fs::is_regular_file(p)) throw Error(ErrorCode::kInvalidConfig, what + " not found: " + p.string());
  };
  must_exist(cfg.taxonomy, "taxonomy");
  if (cfg.curated) must_exist(*cfg.curated, "curated mentions");
  if (cfg.abbreviations) must_exist(*cfg.abbreviations, "abbreviation pairs");
  if (!cfg.table_type_model) throw Error(ErrorCode::kInvalidConfig, "models.table_type is required");
  if (!cfg.segmenter_model) throw Error(ErrorCode::kInvalidConfig, "models.segmenter is required");
  must_exist(*cfg.table_type_model, "table-type model");
  must_exist(*cfg.segmenter_model, "segmenter model");
  cfg.noise.validate();
}

Taxonomy load_configured_taxonomy(const PipelineConfig& cfg) {
  Taxonomy base = load_taxonomy(cfg.taxonomy);
  EvidenceExtras extras;
  if (cfg.curated) extras.curated = load_curated(*cfg.curated);
  if (cfg.abbreviations) extras.abbreviations = load_abbreviations(*cfg.abbreviations);
  return generate_evidences(base, cfg.strategy, extras);
}

SegmentedTable mark_numeric(const RawTable& table, const TableTypePrediction& type) {
  SegmentedTable seg;
  seg.table = table;
  seg.type = type;
  seg.classes.assign(table.rows(), std::vector<CellLabel>(table.cols(), CellLabel::kOther));
  for (std::size_t r = 0; r < table.rows(); ++r) {
    for (std::size_t c = 0; c < table.cols(); ++c) {
      if (is_numeric(table.at(r, c).content)) seg.classes[r][c] = CellLabel::kNumeric;
    }
  }
  return seg;
}

Pipeline::Pipeline(PipelineConfig config)
    : config_(std::move(config)), taxonomy_(load_configured_taxonomy(config_)) {
  validate(config_);
  table_type_ = TableTypeModel::load(config_.table_type_model->string());
  segmenter_ = ClassifierModel::load(config_.segmenter_model->string());
}

Pipeline::Pipeline(PipelineConfig config, Taxonomy taxonomy, TableTypeModel table_type, ClassifierModel segmenter)
    : config_(std::move(config)),
      taxonomy_(std::move(taxonomy)),
      table_type_(std::move(table_type)),
      segmenter_(std::move(segmenter)) {
  config_.noise.validate();
}

PaperExtraction Pipeline::extract(const PaperSource& source) const {
  try {
    return run(source);
  } catch (const std::exception& e) {
    PaperExtraction out;
    out.document.paper_id = source.paper_id;
    out.failed = true;
    out.diagnostics.set_paper_id(source.paper_id);
    out.diagnostics.add("ExtractionFailed", e.what());
    return out;
  }
}

PaperExtraction Pipeline::extract(const fs::path& source) const {
  PaperSource src;
  try {
    src = load_bundle(source);
  } catch (const std::exception& e) {
    PaperExtraction out;
    std::string id = source.filename().string();
    out.document.paper_id = id;
    out.failed = true;
    out.diagnostics.set_paper_id(id);
    out.diagnostics.add("ExtractionFailed", e.what());
    return out;
  }
  return extract(src);
}

PaperExtraction Pipeline::run(const PaperSource& source) const {
  PaperExtraction out;
  auto ingested = ingest(source, config_.ingest);
  out.document = std::move(ingested.document);
  out.diagnostics = std::move(ingested.diagnostics);
  out.diagnostics.set_paper_id(out.document.paper_id);

  FragmentIndex index = build_index(out.document, config_.bm25, config_.fragments);
  Linker linker(out.document, index, taxonomy_, config_.noise);
  std::size_t relevant = 0;
  for (const auto& table : out.document.tables) {
    auto type = classify_table_type(table, table_type_, config_.table_type_threshold);
    if (type.decided_type == TableType::kIrrelevant) {
      out.tables.push_back(mark_numeric(table, type));
      continue;
    }
    ++relevant;
    SegmentedTable seg = segment_table(table, segmenter_, index, config_.evidence_depth);
    seg.type = type;
    for (std::size_t r = 0; r < table.rows(); ++r) {
      for (std::size_t c = 0; c < table.cols(); ++c) {
        if (seg.at(r, c) != CellLabel::kNumeric) continue;
        // Spanned copies of one numeric cell are linked once, at the origin.
        if (table.at(r, c).span_origin != CellPosition{r, c}) continue;
        auto cands = linker.candidates(seg, {r, c}, &out.diagnostics);
        if (!cands.empty()) out.candidates.push_back(std::move(cands.front()));
      }
    }
    out.tables.push_back(std::move(seg));
  }
  if (relevant == 0) out.diagnostics.add("NoRelevantTables", "no leaderboard or ablation tables found");
  out.records = filter_results(out.candidates, taxonomy_, config_.thresholds.t1, config_.thresholds.t2);
  return out;
}

std::vector<ScoredCandidate> Pipeline::cell_candidates(const PaperDocument& doc, const SegmentedTable& seg,
                                                       CellPosition cell) const {
  FragmentIndex index = build_index(doc, config_.bm25, config_.fragments);
  Linker linker(doc, index, taxonomy_, config_.noise);
  return linker.candidates(seg, cell);
}

std::vector<PaperExtraction> Pipeline::extract_all(const std::vector<fs::path>& sources, std::size_t jobs) const {
  std::vector<PaperExtraction> results(sources.size());
  jobs = std::max<std::size_t>(1, std::min(jobs, sources.size()));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < sources.size(); i = next++) results[i] = extract(sources[i]);
  };
  std::vector<std::thread> pool;
  for (std::size_t i = 1; i < jobs; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return results;
}

}  // namespace axtract
