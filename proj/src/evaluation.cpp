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


#include "axtract/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>

#include "axtract/error.hpp"
#include "axtract/text.hpp"
#include "json.hpp"

namespace axtract {

using nlohmann::ordered_json;

namespace {

struct Item {
  std::vector<std::string> keys;
  std::optional<double> value;
};

bool item_less(const Item& a, const Item& b) {
  if (a.keys != b.keys) return a.keys < b.keys;
  return a.value.value_or(0.0) < b.value.value_or(0.0);
}

bool item_match(const Item& a, const Item& b) {
  if (a.keys != b.keys) return false;
  if (a.value.has_value() != b.value.has_value()) return false;
  return !a.value || std::abs(*a.value - *b.value) <= kValueTolerance;
}

Item make_item(const std::string& task, const std::string& dataset, const std::string& metric, double value,
               Granularity g) {
  Item it;
  switch (g) {
    case Granularity::kTdms:
      it.keys = {text::to_lower(task), text::to_lower(dataset), text::to_lower(metric)};
      it.value = value;
      break;
    case Granularity::kTdm:
      it.keys = {text::to_lower(task), text::to_lower(dataset), text::to_lower(metric)};
      break;
    case Granularity::kTask:
      it.keys = {text::to_lower(task)};
      break;
    case Granularity::kDataset:
      it.keys = {text::to_lower(dataset)};
      break;
    case Granularity::kMetric:
      it.keys = {text::to_lower(metric)};
      break;
  }
  return it;
}

// Sorted, with near-duplicates collapsed.
std::vector<Item> as_set(std::vector<Item> items) {
  std::sort(items.begin(), items.end(), item_less);
  std::vector<Item> out;
  for (auto& it : items) {
    if (!out.empty() && item_match(out.back(), it)) continue;
    out.push_back(std::move(it));
  }
  return out;
}

std::size_t count_matches(const std::vector<Item>& pred, const std::vector<Item>& gold) {
  std::vector<bool> used(pred.size(), false);
  std::size_t tp = 0;
  for (const auto& g : gold) {
    for (std::size_t i = 0; i < pred.size(); ++i) {
      if (!used[i] && item_match(pred[i], g)) {
        used[i] = true;
        ++tp;
        break;
      }
    }
  }
  return tp;
}

std::string group_leaderboard(const std::string& t, const std::string& d, const std::string& m) {
  return t + " | " + d + " | " + m;
}

ordered_json prf_json(const Prf& p) {
  return {{"precision", p.precision}, {"recall", p.recall}, {"f1", p.f1}};
}

ordered_json group_json(const GroupScore& g) {
  ordered_json j = {{"key", g.key},
                    {"true_positives", g.true_positives},
                    {"predicted", g.predicted},
                    {"gold", g.gold}};
  j.update(prf_json(g.scores));
  return j;
}

}  // namespace

std::string to_string(Granularity g) {
  switch (g) {
    case Granularity::kTdms:
      return "tdms";
    case Granularity::kTdm:
      return "tdm";
    case Granularity::kTask:
      return "task";
    case Granularity::kDataset:
      return "dataset";
    case Granularity::kMetric:
      return "metric";
  }
  return "tdms";
}

Granularity parse_granularity(std::string_view name) {
  std::string n = text::to_lower(name);
  for (Granularity g : {Granularity::kTdms, Granularity::kTdm, Granularity::kTask, Granularity::kDataset,
                        Granularity::kMetric}) {
    if (to_string(g) == n) return g;
  }
  throw Error(ErrorCode::kUnknownGranularity, "unknown granularity '" + std::string(name) + "'");
}

MacroAxis parse_macro_axis(std::string_view name) {
  std::string n = text::to_lower(name);
  if (n == "paper") return MacroAxis::kPaper;
  if (n == "leaderboard") return MacroAxis::kLeaderboard;
  throw Error(ErrorCode::kInvalidConfig, "unknown macro axis '" + std::string(name) + "'");
}

Prf make_prf(double precision, double recall) {
  Prf p{precision, recall, 0.0};
  if (precision + recall > 0.0) p.f1 = 2.0 * precision * recall / (precision + recall);
  return p;
}

Prf prf_from_counts(std::size_t tp, std::size_t predicted, std::size_t gold) {
  double p = predicted ? static_cast<double>(tp) / static_cast<double>(predicted) : 0.0;
  double r = gold ? static_cast<double>(tp) / static_cast<double>(gold) : 0.0;
  return make_prf(p, r);
}

std::vector<GoldRecord> parse_gold(std::string_view data, const Taxonomy& taxonomy) {
  std::vector<GoldRecord> out;
  if (text::trim(data).empty()) return out;
  try {
    auto j = nlohmann::json::parse(data);
    const auto& list = j.is_object() ? j.at("records") : j;
    if (!list.is_array()) throw Error(ErrorCode::kMalformedGold, "expected an array of gold records");
    for (const auto& item : list) {
      GoldRecord g;
      g.paper_id = item.at("paper_id").get<std::string>();
      g.value = item.at("value").get<double>();
      std::string* fields[] = {&g.task, &g.dataset, &g.metric};
      for (EntityType t : kEntityTypes) {
        std::string name = item.at(to_string(t)).get<std::string>();
        auto canon = taxonomy.canonical(t, name);
        if (!canon) g.unknown_entity = true;
        *fields[static_cast<int>(t)] = canon ? *canon : text::trim(name);
      }
      if (item.contains("table_id")) g.table_id = item.at("table_id").get<std::string>();
      if (item.contains("row")) g.row = item.at("row").get<std::size_t>();
      if (item.contains("col")) g.col = item.at("col").get<std::size_t>();
      out.push_back(std::move(g));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedGold, e.what());
  }
  return out;
}

std::vector<GoldRecord> load_gold(const std::filesystem::path& path, const Taxonomy& taxonomy) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_gold(ss.str(), taxonomy);
}

EvalReport evaluate_records(const std::vector<ResultRecord>& pred, const std::vector<GoldRecord>& gold,
                            Granularity granularity, MacroAxis axis) {
  // (paper, group) -> items
  using Key = std::pair<std::string, std::string>;
  std::map<Key, std::vector<Item>> pred_items;
  std::map<Key, std::vector<Item>> gold_items;
  auto group_of = [&](const std::string& paper, const std::string& t, const std::string& d,
                      const std::string& m) {
    return axis == MacroAxis::kPaper ? paper : group_leaderboard(t, d, m);
  };
  for (const auto& r : pred) {
    pred_items[{r.paper_id, group_of(r.paper_id, r.task, r.dataset, r.metric)}].push_back(
        make_item(r.task, r.dataset, r.metric, r.value, granularity));
  }
  for (const auto& g : gold) {
    gold_items[{g.paper_id, group_of(g.paper_id, g.task, g.dataset, g.metric)}].push_back(
        make_item(g.task, g.dataset, g.metric, g.value, granularity));
  }
  std::set<std::string> papers;
  for (const auto& [k, _] : pred_items) papers.insert(k.first);
  for (const auto& [k, _] : gold_items) papers.insert(k.first);

  EvalReport report;
  report.granularity = granularity;
  report.macro_axis = axis;

  // Micro and per-paper scores always match within a paper.
  std::size_t tp = 0, np = 0, ng = 0;
  for (const auto& paper : papers) {
    std::vector<Item> p_all, g_all;
    for (const auto& [k, items] : pred_items) {
      if (k.first == paper) p_all.insert(p_all.end(), items.begin(), items.end());
    }
    for (const auto& [k, items] : gold_items) {
      if (k.first == paper) g_all.insert(g_all.end(), items.begin(), items.end());
    }
    auto ps = as_set(std::move(p_all));
    auto gs = as_set(std::move(g_all));
    GroupScore s{paper, count_matches(ps, gs), ps.size(), gs.size(), {}};
    s.scores = prf_from_counts(s.true_positives, s.predicted, s.gold);
    tp += s.true_positives;
    np += s.predicted;
    ng += s.gold;
    report.per_paper.push_back(s);
  }
  report.micro = prf_from_counts(tp, np, ng);

  std::map<std::string, GroupScore> groups;
  if (axis == MacroAxis::kPaper) {
    for (const auto& s : report.per_paper) groups[s.key] = s;
  } else {
    std::set<Key> keys;
    for (const auto& [k, _] : pred_items) keys.insert(k);
    for (const auto& [k, _] : gold_items) keys.insert(k);
    for (const auto& k : keys) {
      auto ps = as_set(pred_items.contains(k) ? pred_items.at(k) : std::vector<Item>{});
      auto gs = as_set(gold_items.contains(k) ? gold_items.at(k) : std::vector<Item>{});
      auto& g = groups[k.second];
      g.key = k.second;
      g.true_positives += count_matches(ps, gs);
      g.predicted += ps.size();
      g.gold += gs.size();
    }
    for (auto& [_, g] : groups) g.scores = prf_from_counts(g.true_positives, g.predicted, g.gold);
  }
  double sum_p = 0.0, sum_r = 0.0;
  std::size_t n = 0;
  for (const auto& [_, g] : groups) {
    report.per_group.push_back(g);
    if (g.gold == 0) continue;
    sum_p += g.scores.precision;
    sum_r += g.scores.recall;
    ++n;
  }
  if (n) report.macro = make_prf(sum_p / static_cast<double>(n), sum_r / static_cast<double>(n));
  return report;
}

std::string report_to_json(const std::vector<EvalReport>& reports) {
  ordered_json out = ordered_json::array();
  for (const auto& r : reports) {
    ordered_json j;
    j["granularity"] = to_string(r.granularity);
    j["macro_axis"] = r.macro_axis == MacroAxis::kPaper ? "paper" : "leaderboard";
    j["micro"] = prf_json(r.micro);
    j["macro"] = prf_json(r.macro);
    j["per_paper"] = ordered_json::array();
    for (const auto& g : r.per_paper) j["per_paper"].push_back(group_json(g));
    if (r.macro_axis == MacroAxis::kLeaderboard) {
      j["per_leaderboard"] = ordered_json::array();
      for (const auto& g : r.per_group) j["per_leaderboard"].push_back(group_json(g));
    }
    out.push_back(std::move(j));
  }
  return out.dump(2) + "\n";
}

std::string report_to_text(const std::vector<EvalReport>& reports) {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof line, "%-12s %8s %8s %8s %8s %8s %8s\n", "", "Micro P", "Micro R", "Micro F1",
                "Macro P", "Macro R", "Macro F1");
  out += line;
  for (const auto& r : reports) {
    std::string name = to_string(r.granularity);
    std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) {
      return static_cast<char>(std::toupper(c));
    });
    std::snprintf(line, sizeof line, "%-12s %8.1f %8.1f %8.1f %8.1f %8.1f %8.1f\n", name.c_str(),
                  100 * r.micro.precision, 100 * r.micro.recall, 100 * r.micro.f1, 100 * r.macro.precision,
                  100 * r.macro.recall, 100 * r.macro.f1);
    out += line;
  }
  return out;
}

TopKAccuracy topk_linking_accuracy(const GoldCorpus& corpus, const Taxonomy& taxonomy, const NoiseModel& noise,
                                   std::size_t k) {
  TopKAccuracy acc;
  acc.k = k;
  std::map<std::string, std::unique_ptr<Linker>> linkers;
  std::size_t hit_lb = 0, hit_t = 0, hit_d = 0, hit_m = 0;
  for (const auto& view : corpus.views()) {
    if (view.gold->links.empty()) continue;
    auto& linker = linkers[view.gold->paper_id];
    if (!linker) linker = std::make_unique<Linker>(*view.document, *view.index, taxonomy, noise);
    SegmentedTable seg = gold_segmented_table(view);
    for (const auto& link : view.gold->links) {
      if (seg.at(link.row, link.col) != CellLabel::kNumeric) {
        throw Error(ErrorCode::kMalformedGold, view.gold->paper_id + "/" + view.gold->table_id +
                                                   ": link on a non-numeric cell");
      }
      auto cands = linker->candidates(seg, {link.row, link.col});
      if (cands.size() > k) cands.resize(k);
      auto same = [](const std::string& a, const std::string& b) { return text::to_lower(a) == text::to_lower(b); };
      bool lb = false, t = false, d = false, m = false;
      for (const auto& c : cands) {
        lb = lb || (same(c.task, link.task) && same(c.dataset, link.dataset) && same(c.metric, link.metric));
        t = t || same(c.task, link.task);
        d = d || same(c.dataset, link.dataset);
        m = m || same(c.metric, link.metric);
      }
      hit_lb += lb;
      hit_t += t;
      hit_d += d;
      hit_m += m;
      ++acc.cells;
    }
  }
  if (acc.cells) {
    double n = static_cast<double>(acc.cells);
    acc.leaderboard = static_cast<double>(hit_lb) / n;
    acc.task = static_cast<double>(hit_t) / n;
    acc.dataset = static_cast<double>(hit_d) / n;
    acc.metric = static_cast<double>(hit_m) / n;
  }
  return acc;
}

}  // namespace axtract
