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

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "axtract/pipeline.hpp"
#include "axtract/serialization.hpp"

namespace axtract {

struct AnnotationDecision {
  std::string paper_id;
  std::string table_id;
  std::size_t row = 0;
  std::size_t col = 0;
  // Empty means the cell was rejected.
  std::optional<std::string> leaderboard_id;
  std::optional<double> value_override;
  std::optional<std::string> note;
  std::string timestamp;

  bool rejected() const { return !leaderboard_id.has_value(); }
  friend bool operator==(const AnnotationDecision&, const AnnotationDecision&) = default;
};

Json to_json(const AnnotationDecision& decision);
// Throws Error{kInvalidConfig} on a malformed decision object.
AnnotationDecision decision_from_json(const Json& j);

// (paper, table, row, col)
using CellKey = std::tuple<std::string, std::string, std::size_t, std::size_t>;

// Last decision per cell, in log order.
std::map<CellKey, AnnotationDecision> replay(const std::vector<AnnotationDecision>& log);

// Directory layout:
//   papers/<paper_id>/source.json      uploaded files
//   papers/<paper_id>/extraction.json  document, segmented tables, candidates
//   papers/<paper_id>/results.json     filtered records
//   annotations.jsonl                  append-only decision log
class ExtractionStore {
 public:
  explicit ExtractionStore(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }
  void save(const PaperSource& source, const PaperExtraction& extraction);
  bool has(const std::string& paper_id) const;
  std::vector<std::string> paper_ids() const;
  Json read_extraction(const std::string& paper_id) const;
  Json read_results(const std::string& paper_id) const;

  void append(const AnnotationDecision& decision);
  std::vector<AnnotationDecision> log() const;

 private:
  std::filesystem::path paper_dir(const std::string& paper_id) const;

  std::filesystem::path root_;
  mutable std::mutex log_mutex_;
};

// Checks the leaderboard against the taxonomy (Error{kUnknownLeaderboard})
// and appends the decision to the store's log.
void persist_annotations(ExtractionStore& store, const Taxonomy& taxonomy, const AnnotationDecision& decision);

// Paper ids usable as directory names: [A-Za-z0-9._-], not "." or "..".
bool valid_paper_id(const std::string& id);

struct HttpResponse {
  int status = 200;
  std::string body;
};

// Request handling behind the HTTP API; each method maps to one endpoint.
class ReviewService {
 public:
  ReviewService(const Pipeline& pipeline, ExtractionStore& store);
  ~ReviewService();

  // POST /papers. Body is {"paper_id"?, "files": {path: text}} when the
  // content type is JSON, otherwise a .tar.gz bundle.
  HttpResponse upload(const std::string& body, const std::string& content_type,
                      const std::optional<std::string>& paper_id);
  // GET /papers
  HttpResponse list_papers() const;
  // GET /papers/{id}
  HttpResponse get_paper(const std::string& paper_id) const;
  // GET /papers/{id}/cells/{table}/{row}/{col}/candidates?k=
  HttpResponse get_candidates(const std::string& paper_id, const std::string& table_id,
                              const std::string& row, const std::string& col, const std::string& k) const;
  // POST /annotations
  HttpResponse post_annotation(const std::string& body);
  // GET /papers/{id}/results
  HttpResponse get_results(const std::string& paper_id) const;
  // GET /export
  HttpResponse export_annotations() const;

  // Ranked candidates for a cell of a stored paper; nullopt when the paper,
  // table or numeric cell does not exist.
  std::optional<std::vector<ScoredCandidate>> candidates(const std::string& paper_id, const std::string& table_id,
                                                         std::size_t row, std::size_t col) const;
  std::vector<ResultRecord> merged_results(const std::string& paper_id) const;

 private:
  struct Loaded;
  std::shared_ptr<const Loaded> load(const std::string& paper_id) const;

  const Pipeline& pipeline_;
  ExtractionStore& store_;
  mutable std::mutex cache_mutex_;
  mutable std::map<std::string, std::shared_ptr<const Loaded>> cache_;
  std::mutex upload_mutex_;
};

// HTTP front end over ReviewService.
class HttpServer {
 public:
  explicit HttpServer(ReviewService& service);
  ~HttpServer();

  // Binds to an ephemeral port and returns it; -1 on failure.
  int bind_to_any_port(const std::string& host = "127.0.0.1");
  bool bind(const std::string& host, int port);
  // Blocks until stop().
  bool listen_after_bind();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace axtract
