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


#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "axtract/error.hpp"
#include "axtract/evaluation.hpp"
#include "axtract/pipeline.hpp"
#include "axtract/serialization.hpp"
#include "axtract/service.hpp"

namespace fs = std::filesystem;
using namespace axtract;

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& data) {
  if (path.empty() || path == "-") {
    std::cout << data;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out << data;
}

// Config without the model-file requirement, for commands that only link.
PipelineConfig read_config(const std::string& path) {
  return parse_config(read_file(path), fs::path(path).parent_path());
}

PipelineConfig config_with_ingest(const std::string& path) {
  return path.empty() ? PipelineConfig{} : read_config(path);
}

std::map<std::string, double> parse_field_weights(const std::vector<std::string>& items) {
  std::map<std::string, double> out;
  for (const auto& item : items) {
    auto eq = item.find('=');
    double w = 0.0;
    try {
      if (eq == std::string::npos || eq == 0) throw std::invalid_argument(item);
      std::size_t used = 0;
      w = std::stod(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1 || !(w >= 0.0)) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::kInvalidConfig, "bad field weight '" + item + "', expected name=w with w >= 0");
    }
    out[item.substr(0, eq)] = w;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Extracts leaderboard results from LaTeX paper sources"};
  app.require_subcommand(1);

  std::string config_path, out_path, store_path, diagnostics_path, candidates_path;
  std::vector<std::string> sources;
  std::size_t jobs = 1;

  auto* ingest_cmd = app.add_subcommand("ingest", "Dump the parsed document of a source bundle as JSON");
  ingest_cmd->add_option("--source", sources, "Source directory, .tar.gz or .tex")->required();
  ingest_cmd->add_option("--config", config_path, "Config file (for macros)");
  ingest_cmd->add_option("--out", out_path, "Output JSON (default stdout)");
  ingest_cmd->add_option("--diagnostics", diagnostics_path, "Diagnostics JSONL");

  auto* extract_cmd = app.add_subcommand("extract", "Run the full pipeline and write result records");
  extract_cmd->add_option("--config", config_path, "Config file")->required();
  extract_cmd->add_option("--source", sources, "Source bundle (repeatable)")->required();
  extract_cmd->add_option("--out", out_path, "Records JSON (default stdout)");
  extract_cmd->add_option("--store", store_path, "Also write the extraction store here");
  extract_cmd->add_option("--diagnostics", diagnostics_path, "Diagnostics JSONL");
  extract_cmd->add_option("--candidates", candidates_path, "Top candidate per numeric cell, JSONL");
  extract_cmd->add_option("--jobs", jobs, "Papers processed in parallel")->check(CLI::PositiveNumber);

  std::string gold_path;
  std::size_t depth = kDefaultEvidenceDepth;
  double alpha = 1.0;
  std::vector<std::string> field_weights;
  auto* train_seg = app.add_subcommand("train-segmenter", "Train the cell classifier from gold segmentation");
  train_seg->add_option("--gold", gold_path, "Gold segmentation JSON")->required();
  train_seg->add_option("--out", out_path, "Model JSON")->required();
  train_seg->add_option("--config", config_path, "Config file (macros, BM25, evidence depth)");
  train_seg->add_option("--evidence-depth", depth, "Fragments retrieved per cell");
  train_seg->add_option("--alpha", alpha, "Additive smoothing")->check(CLI::PositiveNumber);
  train_seg->add_option("--field-weight", field_weights, "Per-field log-likelihood weight, name=w")
      ->delimiter(',');

  auto* train_tt = app.add_subcommand("train-table-type", "Train the table-type classifiers");
  train_tt->add_option("--gold", gold_path, "Gold segmentation JSON with table types")->required();
  train_tt->add_option("--out", out_path, "Model JSON")->required();
  train_tt->add_option("--config", config_path, "Config file (macros)");
  train_tt->add_option("--alpha", alpha, "Additive smoothing")->check(CLI::PositiveNumber);
  train_tt->add_option("--field-weight", field_weights, "Per-field log-likelihood weight, name=w")
      ->delimiter(',');

  std::string pred_path, granularity = "tdms", macro_axis = "paper", format = "text", taxonomy_path;
  auto* eval_cmd = app.add_subcommand("evaluate", "Score records against gold tuples");
  eval_cmd->add_option("--pred", pred_path, "Predicted records JSON")->required();
  eval_cmd->add_option("--gold", gold_path, "Gold records JSON")->required();
  eval_cmd->add_option("--granularity", granularity, "tdms, tdm, task, dataset, metric or all");
  eval_cmd->add_option("--macro-axis", macro_axis, "paper or leaderboard");
  eval_cmd->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
  eval_cmd->add_option("--taxonomy", taxonomy_path, "Taxonomy for entity canonicalization");
  eval_cmd->add_option("--out", out_path, "Report file (default stdout)");

  std::string strategy;
  std::vector<std::size_t> ks;
  auto* link_cmd = app.add_subcommand("link-eval", "Top-k linking accuracy on gold-segmented tables");
  link_cmd->add_option("--gold-seg", gold_path, "Gold segmentation JSON with links")->required();
  link_cmd->add_option("--k", ks, "Cut-off (repeatable)")->required()->check(CLI::PositiveNumber);
  link_cmd->add_option("--config", config_path, "Config file (taxonomy, evidence, noise)")->required();
  link_cmd->add_option("--strategy", strategy, "Override the evidence strategy");
  link_cmd->add_option("--out", out_path, "Report JSON (default stdout)");

  int port = 8080;
  std::string host = "127.0.0.1";
  auto* serve_cmd = app.add_subcommand("serve", "Serve the review HTTP API");
  serve_cmd->add_option("--config", config_path, "Config file")->required();
  serve_cmd->add_option("--port", port, "Port")->check(CLI::Range(0, 65535));
  serve_cmd->add_option("--host", host, "Bind address");
  serve_cmd->add_option("--store", store_path, "Extraction store (AXTRACT_STORE overrides)");

  auto* abbrev_cmd = app.add_subcommand("detect-abbreviations", "Find abbreviation pairs in source bundles");
  abbrev_cmd->add_option("--source", sources, "Source bundle (repeatable)")->required();
  abbrev_cmd->add_option("--config", config_path, "Config file (macros)");
  abbrev_cmd->add_option("--out", out_path, "TSV output (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest_cmd) {
      PipelineConfig cfg = config_with_ingest(config_path);
      Json docs = Json::array();
      Diagnostics all;
      for (const auto& s : sources) {
        auto result = ingest(load_bundle(s), cfg.ingest);
        docs.push_back(to_json(result.document));
        all.append(result.diagnostics);
      }
      write_output(out_path, dump(sources.size() == 1 ? docs.at(0) : docs));
      if (!diagnostics_path.empty()) write_output(diagnostics_path, all.to_jsonl());
      return 0;
    }
    if (*extract_cmd) {
      Pipeline pipeline(load_config(config_path));
      std::vector<fs::path> paths(sources.begin(), sources.end());
      auto results = pipeline.extract_all(paths, jobs);
      std::vector<ResultRecord> records;
      Diagnostics diags;
      std::string cand_lines;
      int failed = 0;
      std::unique_ptr<ExtractionStore> store;
      if (const char* env = std::getenv("AXTRACT_STORE"); env && *env) store_path = env;
      if (!store_path.empty()) store = std::make_unique<ExtractionStore>(store_path);
      for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        records.insert(records.end(), r.records.begin(), r.records.end());
        diags.append(r.diagnostics);
        for (const auto& c : r.candidates) cand_lines += to_json(c).dump() + "\n";
        if (r.failed) {
          ++failed;
          std::cerr << "axtract: " << r.document.paper_id << ": extraction failed\n";
          continue;
        }
        if (store) store->save(load_bundle(paths[i]), r);
      }
      write_output(out_path, dump(to_json(records)));
      if (!diagnostics_path.empty()) write_output(diagnostics_path, diags.to_jsonl());
      if (!candidates_path.empty()) write_output(candidates_path, cand_lines);
      return failed == static_cast<int>(results.size()) && !results.empty() ? 1 : 0;
    }
    if (*train_seg) {
      PipelineConfig cfg = config_with_ingest(config_path);
      if (!config_path.empty() && train_seg->count("--evidence-depth") == 0) depth = cfg.evidence_depth;
      GoldCorpus corpus(load_gold_segmentation(gold_path), cfg.ingest, cfg.bm25);
      TrainConfig tc;
      tc.alpha = alpha;
      tc.field_weights = parse_field_weights(field_weights);
      train_segmenter(corpus, depth, tc).save(out_path);
      return 0;
    }
    if (*train_tt) {
      PipelineConfig cfg = config_with_ingest(config_path);
      GoldCorpus corpus(load_gold_segmentation(gold_path), cfg.ingest, cfg.bm25);
      std::vector<std::pair<RawTable, TableType>> gold;
      for (const auto& v : corpus.views()) gold.emplace_back(*v.table, v.gold->type);
      TrainConfig tc;
      tc.alpha = alpha;
      tc.field_weights = parse_field_weights(field_weights);
      train_table_type(gold, tc).save(out_path);
      return 0;
    }
    if (*eval_cmd) {
      Taxonomy taxonomy = taxonomy_path.empty() ? Taxonomy{} : load_taxonomy(taxonomy_path);
      auto pred = records_from_json(Json::parse(read_file(pred_path)));
      auto gold = load_gold(gold_path, taxonomy);
      std::vector<Granularity> grans;
      if (granularity == "all") {
        grans = {Granularity::kTdms, Granularity::kTdm, Granularity::kTask, Granularity::kDataset,
                 Granularity::kMetric};
      } else {
        grans.push_back(parse_granularity(granularity));
      }
      MacroAxis axis = parse_macro_axis(macro_axis);
      std::vector<EvalReport> reports;
      for (auto g : grans) reports.push_back(evaluate_records(pred, gold, g, axis));
      write_output(out_path, format == "json" ? report_to_json(reports) : report_to_text(reports));
      return 0;
    }
    if (*link_cmd) {
      PipelineConfig cfg = read_config(config_path);
      if (!strategy.empty()) cfg.strategy = parse_strategy(strategy);
      Taxonomy taxonomy = load_configured_taxonomy(cfg);
      GoldCorpus corpus(load_gold_segmentation(gold_path), cfg.ingest, cfg.bm25);
      Json out = Json::array();
      for (std::size_t k : ks) {
        auto acc = topk_linking_accuracy(corpus, taxonomy, cfg.noise, k);
        out.push_back({{"k", acc.k},
                       {"strategy", to_string(cfg.strategy)},
                       {"cells", acc.cells},
                       {"leaderboard", acc.leaderboard},
                       {"task", acc.task},
                       {"dataset", acc.dataset},
                       {"metric", acc.metric}});
      }
      write_output(out_path, dump(out));
      return 0;
    }
    if (*serve_cmd) {
      if (const char* env = std::getenv("AXTRACT_STORE"); env && *env) store_path = env;
      if (store_path.empty()) throw Error(ErrorCode::kInvalidConfig, "--store or AXTRACT_STORE is required");
      Pipeline pipeline(load_config(config_path));
      ExtractionStore store(store_path);
      ReviewService service(pipeline, store);
      HttpServer server(service);
      if (!server.bind(host, port)) throw Error(ErrorCode::kIo, "cannot bind " + host + ":" + std::to_string(port));
      std::cerr << "axtract: serving " << store_path << " on http://" << host << ":" << port << "\n";
      return server.listen_after_bind() ? 0 : 1;
    }
    if (*abbrev_cmd) {
      PipelineConfig cfg = config_with_ingest(config_path);
      std::vector<PaperDocument> docs;
      for (const auto& s : sources) docs.push_back(ingest(load_bundle(s), cfg.ingest).document);
      write_output(out_path, abbreviations_to_tsv(detect_abbreviations(docs)));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "axtract: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
