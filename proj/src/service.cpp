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


#include "axtract/service.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>

#include "axtract/error.hpp"
#include "axtract/numeric.hpp"
#include "httplib.h"

namespace axtract {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& data) {
  fs::path tmp = p;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
    out << data;
  }
  fs::rename(tmp, p);
}

std::string utc_now() {
  auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

HttpResponse json_response(int status, const Json& body) { return {status, body.dump()}; }

HttpResponse error_response(int status, const std::string& message) {
  return json_response(status, Json{{"error", message}});
}

std::optional<std::size_t> parse_index(const std::string& s) {
  if (s.empty() || s.size() > 9 || !std::all_of(s.begin(), s.end(), ::isdigit)) return std::nullopt;
  return static_cast<std::size_t>(std::stoul(s));
}

}  // namespace

Json to_json(const AnnotationDecision& d) {
  Json j = {{"paper_id", d.paper_id}, {"table_id", d.table_id}, {"row", d.row}, {"col", d.col}};
  j["leaderboard_id"] = d.leaderboard_id ? Json(*d.leaderboard_id) : Json(nullptr);
  j["rejected"] = d.rejected();
  j["value_override"] = d.value_override ? Json(*d.value_override) : Json(nullptr);
  j["note"] = d.note ? Json(*d.note) : Json(nullptr);
  j["timestamp"] = d.timestamp;
  return j;
}

AnnotationDecision decision_from_json(const Json& j) {
  AnnotationDecision d;
  try {
    if (!j.is_object()) throw Error(ErrorCode::kInvalidConfig, "decision must be an object");
    d.paper_id = j.at("paper_id").get<std::string>();
    d.table_id = j.at("table_id").get<std::string>();
    d.row = j.at("row").get<std::size_t>();
    d.col = j.at("col").get<std::size_t>();
    bool rejected = j.value("rejected", false);
    if (!rejected && j.contains("leaderboard_id") && !j.at("leaderboard_id").is_null()) {
      d.leaderboard_id = j.at("leaderboard_id").get<std::string>();
    } else if (!rejected) {
      throw Error(ErrorCode::kInvalidConfig, "decision needs leaderboard_id or rejected: true");
    }
    auto override_field = j.contains("value_override") ? "value_override" : "value";
    if (j.contains(override_field) && !j.at(override_field).is_null()) {
      d.value_override = j.at(override_field).get<double>();
    }
    if (j.contains("note") && !j.at("note").is_null()) d.note = j.at("note").get<std::string>();
    if (j.contains("timestamp")) d.timestamp = j.at("timestamp").get<std::string>();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig, e.what());
  }
  return d;
}

std::map<CellKey, AnnotationDecision> replay(const std::vector<AnnotationDecision>& log) {
  std::map<CellKey, AnnotationDecision> out;
  for (const auto& d : log) out[{d.paper_id, d.table_id, d.row, d.col}] = d;
  return out;
}

bool valid_paper_id(const std::string& id) {
  if (id.empty() || id == "." || id == ".." || id.size() > 200) return false;
  return std::all_of(id.begin(), id.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '.' || c == '_' || c == '-';
  });
}

ExtractionStore::ExtractionStore(fs::path root) : root_(std::move(root)) {
  fs::create_directories(root_ / "papers");
}

fs::path ExtractionStore::paper_dir(const std::string& paper_id) const {
  if (!valid_paper_id(paper_id)) throw Error(ErrorCode::kIo, "invalid paper id '" + paper_id + "'");
  return root_ / "papers" / paper_id;
}

void ExtractionStore::save(const PaperSource& source, const PaperExtraction& ex) {
  fs::path dir = paper_dir(ex.document.paper_id);
  fs::create_directories(dir);
  Json files = Json::object();
  for (const auto& [path, content] : source.files) files[path] = content;
  write_file(dir / "source.json",
             dump(Json{{"paper_id", source.paper_id}, {"main_file", source.main_file}, {"files", files}}));

  Json doc = to_json(ex.document);
  doc.erase("tables");
  Json tables = Json::array();
  for (const auto& t : ex.tables) tables.push_back(to_json(t));
  Json cands = Json::array();
  for (const auto& c : ex.candidates) cands.push_back(to_json(c));
  Json diags = Json::array();
  for (const auto& d : ex.diagnostics.items()) diags.push_back(to_json(d));
  write_file(dir / "extraction.json", dump(Json{{"paper_id", ex.document.paper_id},
                                                {"failed", ex.failed},
                                                {"document", doc},
                                                {"tables", tables},
                                                {"candidates", cands},
                                                {"diagnostics", diags}}));
  write_file(dir / "results.json", dump(to_json(ex.records)));
}

bool ExtractionStore::has(const std::string& paper_id) const {
  return valid_paper_id(paper_id) && fs::is_regular_file(root_ / "papers" / paper_id / "extraction.json");
}

std::vector<std::string> ExtractionStore::paper_ids() const {
  std::vector<std::string> ids;
  for (const auto& e : fs::directory_iterator(root_ / "papers")) {
    std::string id = e.path().filename().string();
    if (has(id)) ids.push_back(id);
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

Json ExtractionStore::read_extraction(const std::string& paper_id) const {
  return Json::parse(read_file(paper_dir(paper_id) / "extraction.json"));
}

Json ExtractionStore::read_results(const std::string& paper_id) const {
  return Json::parse(read_file(paper_dir(paper_id) / "results.json"));
}

void ExtractionStore::append(const AnnotationDecision& decision) {
  std::lock_guard lock(log_mutex_);
  std::ofstream out(root_ / "annotations.jsonl", std::ios::binary | std::ios::app);
  if (!out) throw Error(ErrorCode::kIo, "cannot append to the annotation log");
  out << to_json(decision).dump() << '\n';
  out.flush();
}

std::vector<AnnotationDecision> ExtractionStore::log() const {
  std::lock_guard lock(log_mutex_);
  std::vector<AnnotationDecision> out;
  std::ifstream in(root_ / "annotations.jsonl", std::ios::binary);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out.push_back(decision_from_json(Json::parse(line)));
  }
  return out;
}

void persist_annotations(ExtractionStore& store, const Taxonomy& taxonomy, const AnnotationDecision& decision) {
  if (decision.leaderboard_id && !taxonomy.find(*decision.leaderboard_id)) {
    throw Error(ErrorCode::kUnknownLeaderboard, "unknown leaderboard '" + *decision.leaderboard_id + "'");
  }
  store.append(decision);
}

struct ReviewService::Loaded {
  PaperDocument document;
  std::vector<SegmentedTable> tables;
  std::vector<ResultRecord> records;
  Json extraction;
  std::unique_ptr<FragmentIndex> index;
  std::unique_ptr<Linker> linker;

  const SegmentedTable* table(const std::string& id) const {
    for (const auto& t : tables) {
      if (t.table.table_id == id) return &t;
    }
    return nullptr;
  }
  std::size_t table_order(const std::string& id) const {
    for (std::size_t i = 0; i < tables.size(); ++i) {
      if (tables[i].table.table_id == id) return i;
    }
    return tables.size();
  }
};

ReviewService::ReviewService(const Pipeline& pipeline, ExtractionStore& store) : pipeline_(pipeline), store_(store) {}

ReviewService::~ReviewService() = default;

std::shared_ptr<const ReviewService::Loaded> ReviewService::load(const std::string& paper_id) const {
  {
    std::lock_guard lock(cache_mutex_);
    auto it = cache_.find(paper_id);
    if (it != cache_.end()) return it->second;
  }
  if (!store_.has(paper_id)) return nullptr;
  auto loaded = std::make_shared<Loaded>();
  loaded->extraction = store_.read_extraction(paper_id);
  Json doc = loaded->extraction.at("document");
  doc["tables"] = Json::array();
  for (const auto& t : loaded->extraction.at("tables")) {
    loaded->tables.push_back(segmented_from_json(t));
    doc["tables"].push_back(to_json(loaded->tables.back().table));
  }
  loaded->document = document_from_json(doc);
  loaded->records = records_from_json(store_.read_results(paper_id));
  const auto& cfg = pipeline_.config();
  loaded->index = std::make_unique<FragmentIndex>(build_index(loaded->document, cfg.bm25, cfg.fragments));
  loaded->linker = std::make_unique<Linker>(loaded->document, *loaded->index, pipeline_.taxonomy(), cfg.noise);
  std::lock_guard lock(cache_mutex_);
  return cache_.emplace(paper_id, std::move(loaded)).first->second;
}

std::optional<std::vector<ScoredCandidate>> ReviewService::candidates(const std::string& paper_id,
                                                                      const std::string& table_id, std::size_t row,
                                                                      std::size_t col) const {
  auto loaded = load(paper_id);
  if (!loaded) return std::nullopt;
  const SegmentedTable* seg = loaded->table(table_id);
  if (!seg || row >= seg->table.rows() || col >= seg->table.cols()) return std::nullopt;
  if (seg->at(row, col) != CellLabel::kNumeric) return std::nullopt;
  return loaded->linker->candidates(*seg, {row, col});
}

HttpResponse ReviewService::upload(const std::string& body, const std::string& content_type,
                                   const std::optional<std::string>& requested_id) {
  PaperSource src;
  try {
    if (content_type.find("json") != std::string::npos) {
      Json j = Json::parse(body);
      for (const auto& [path, content] : j.at("files").items()) src.files[path] = content.get<std::string>();
      if (src.files.empty()) return error_response(400, "no files in upload");
      src.main_file = choose_main_file(src.files);
      src.paper_id = j.value("paper_id", "");
    } else {
      if (body.empty()) return error_response(400, "empty upload");
      fs::path tmp_dir = store_.root() / "tmp";
      fs::create_directories(tmp_dir);
      fs::path tmp = tmp_dir / ("upload-" + fnv1a_hex(body) + ".tar.gz");
      write_file(tmp, body);
      try {
        src = load_bundle(tmp);
      } catch (...) {
        fs::remove(tmp);
        throw;
      }
      fs::remove(tmp);
      src.paper_id.clear();
    }
  } catch (const Json::exception& e) {
    return error_response(400, std::string("malformed upload: ") + e.what());
  } catch (const Error& e) {
    return error_response(400, e.what());
  }
  if (requested_id) src.paper_id = *requested_id;
  if (src.paper_id.empty()) src.paper_id = "upload-" + fnv1a_hex(body).substr(0, 12);
  if (!valid_paper_id(src.paper_id)) return error_response(400, "invalid paper id '" + src.paper_id + "'");

  std::lock_guard lock(upload_mutex_);
  PaperExtraction ex = pipeline_.extract(src);
  store_.save(src, ex);
  {
    std::lock_guard cache_lock(cache_mutex_);
    cache_.erase(src.paper_id);
  }
  return json_response(201, Json{{"paper_id", src.paper_id},
                                 {"failed", ex.failed},
                                 {"tables", ex.tables.size()},
                                 {"records", ex.records.size()}});
}

HttpResponse ReviewService::list_papers() const {
  return json_response(200, Json{{"papers", store_.paper_ids()}});
}

HttpResponse ReviewService::get_paper(const std::string& paper_id) const {
  auto loaded = load(paper_id);
  if (!loaded) return error_response(404, "unknown paper '" + paper_id + "'");
  Json j = loaded->extraction;
  j.erase("candidates");
  return json_response(200, j);
}

HttpResponse ReviewService::get_candidates(const std::string& paper_id, const std::string& table_id,
                                           const std::string& row, const std::string& col,
                                           const std::string& k_text) const {
  auto r = parse_index(row);
  auto c = parse_index(col);
  if (!r || !c) return error_response(400, "row and col must be non-negative integers");
  std::size_t k = 5;
  if (!k_text.empty()) {
    auto parsed = parse_index(k_text);
    if (!parsed || *parsed == 0) return error_response(400, "k must be a positive integer");
    k = *parsed;
  }
  if (!load(paper_id)) return error_response(404, "unknown paper '" + paper_id + "'");
  std::optional<std::vector<ScoredCandidate>> cands;
  try {
    cands = candidates(paper_id, table_id, *r, *c);
  } catch (const Error& e) {
    return error_response(404, e.what());
  }
  if (!cands) return error_response(404, "no numeric cell at " + table_id + "/" + row + "/" + col);
  if (cands->size() > k) cands->resize(k);
  Json list = Json::array();
  for (const auto& cand : *cands) list.push_back(to_json(cand));
  return json_response(200, Json{{"paper_id", paper_id},
                                 {"table_id", table_id},
                                 {"row", *r},
                                 {"col", *c},
                                 {"k", k},
                                 {"candidates", list}});
}

HttpResponse ReviewService::post_annotation(const std::string& body) {
  AnnotationDecision d;
  try {
    d = decision_from_json(Json::parse(body));
  } catch (const Json::exception& e) {
    return error_response(400, std::string("malformed annotation: ") + e.what());
  } catch (const Error& e) {
    return error_response(400, e.what());
  }
  auto loaded = load(d.paper_id);
  if (!loaded) return error_response(404, "unknown paper '" + d.paper_id + "'");
  const SegmentedTable* seg = loaded->table(d.table_id);
  if (!seg || d.row >= seg->table.rows() || d.col >= seg->table.cols()) {
    return error_response(404, "unknown cell");
  }
  if (!d.rejected() && !is_numeric(seg->table.at(d.row, d.col).content)) {
    return error_response(404, "cell is not numeric");
  }
  if (d.timestamp.empty()) d.timestamp = utc_now();
  try {
    persist_annotations(store_, pipeline_.taxonomy(), d);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kUnknownLeaderboard) return error_response(409, e.what());
    throw;
  }
  return json_response(201, Json{{"status", "ok"}, {"decision", to_json(d)}});
}

std::vector<ResultRecord> ReviewService::merged_results(const std::string& paper_id) const {
  auto loaded = load(paper_id);
  if (!loaded) return {};
  std::map<CellKey, AnnotationDecision> decisions;
  for (auto& [key, d] : replay(store_.log())) {
    if (d.paper_id == paper_id) decisions.emplace(key, d);
  }
  std::vector<ResultRecord> out;
  for (const auto& r : loaded->records) {
    if (!decisions.contains({r.paper_id, r.table_id, r.row, r.col})) out.push_back(r);
  }
  for (const auto& [_, d] : decisions) {
    if (d.rejected()) continue;
    auto cands = candidates(paper_id, d.table_id, d.row, d.col);
    if (!cands) continue;
    auto it = std::find_if(cands->begin(), cands->end(),
                           [&](const ScoredCandidate& c) { return c.leaderboard_id == *d.leaderboard_id; });
    if (it == cands->end()) continue;
    ResultRecord rec = to_record(*it);
    if (d.value_override) rec.value = *d.value_override;
    out.push_back(std::move(rec));
  }
  std::stable_sort(out.begin(), out.end(), [&](const ResultRecord& a, const ResultRecord& b) {
    return std::tuple(loaded->table_order(a.table_id), a.row, a.col) <
           std::tuple(loaded->table_order(b.table_id), b.row, b.col);
  });
  return out;
}

HttpResponse ReviewService::get_results(const std::string& paper_id) const {
  if (!load(paper_id)) return error_response(404, "unknown paper '" + paper_id + "'");
  return json_response(200, Json{{"paper_id", paper_id}, {"records", to_json(merged_results(paper_id))}});
}

HttpResponse ReviewService::export_annotations() const {
  Json list = Json::array();
  for (const auto& [_, d] : replay(store_.log())) {
    if (d.rejected()) continue;
    Json j = to_json(d);
    auto cands = candidates(d.paper_id, d.table_id, d.row, d.col);
    if (cands) {
      auto it = std::find_if(cands->begin(), cands->end(),
                             [&](const ScoredCandidate& c) { return c.leaderboard_id == *d.leaderboard_id; });
      if (it != cands->end()) {
        j["task"] = it->task;
        j["dataset"] = it->dataset;
        j["metric"] = it->metric;
        j["confidence"] = it->posterior;
        j["value"] = d.value_override ? *d.value_override : it->normalized_value;
        j["model"] = it->model ? Json(it->model->name) : Json(nullptr);
      }
    }
    list.push_back(std::move(j));
  }
  return json_response(200, Json{{"annotations", list}});
}

struct HttpServer::Impl {
  ReviewService& service;
  httplib::Server server;

  explicit Impl(ReviewService& s) : service(s) {
    auto send = [](httplib::Response& res, const HttpResponse& r) {
      res.status = r.status;
      res.set_content(r.body, "application/json");
    };
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                {"Access-Control-Allow-Headers", "Content-Type"},
                                {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
    server.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
    server.Post("/papers", [this, send](const httplib::Request& req, httplib::Response& res) {
      std::optional<std::string> id;
      if (req.has_param("paper_id")) id = req.get_param_value("paper_id");
      send(res, service.upload(req.body, req.get_header_value("Content-Type"), id));
    });
    server.Get("/papers", [this, send](const httplib::Request&, httplib::Response& res) {
      send(res, service.list_papers());
    });
    server.Get(R"(/papers/([^/]+))", [this, send](const httplib::Request& req, httplib::Response& res) {
      send(res, service.get_paper(req.matches[1]));
    });
    server.Get(R"(/papers/([^/]+)/results)", [this, send](const httplib::Request& req, httplib::Response& res) {
      send(res, service.get_results(req.matches[1]));
    });
    server.Get(R"(/papers/([^/]+)/cells/([^/]+)/([^/]+)/([^/]+)/candidates)",
               [this, send](const httplib::Request& req, httplib::Response& res) {
                 std::string k = req.has_param("k") ? req.get_param_value("k") : "";
                 send(res, service.get_candidates(req.matches[1], req.matches[2], req.matches[3], req.matches[4], k));
               });
    server.Post("/annotations", [this, send](const httplib::Request& req, httplib::Response& res) {
      send(res, service.post_annotation(req.body));
    });
    server.Get("/export", [this, send](const httplib::Request&, httplib::Response& res) {
      send(res, service.export_annotations());
    });
    server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
      if (res.body.empty()) {
        res.set_content(Json{{"error", httplib::status_message(res.status)}}.dump(), "application/json");
      }
    });
    server.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
      std::string msg = "internal error";
      try {
        std::rethrow_exception(ep);
      } catch (const std::exception& e) {
        msg = e.what();
      } catch (...) {
      }
      res.status = 500;
      res.set_content(Json{{"error", msg}}.dump(), "application/json");
    });
  }
};

HttpServer::HttpServer(ReviewService& service) : impl_(std::make_unique<Impl>(service)) {}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind_to_any_port(const std::string& host) { return impl_->server.bind_to_any_port(host); }

bool HttpServer::bind(const std::string& host, int port) { return impl_->server.bind_to_port(host, port); }

bool HttpServer::listen_after_bind() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_) impl_->server.stop();
}

}  // namespace axtract
