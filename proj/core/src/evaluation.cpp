// Copyright 2026 The kged Authors
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

#include "kged/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "kged/error.hpp"

namespace kged {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

const json& require(const json& record, const char* key, std::size_t line) {
  if (!record.contains(key)) {
    throw LoadError(std::string("record is missing '") + key + "'", line);
  }
  return record[key];
}

std::string require_string(const json& record, const char* key, std::size_t line) {
  const json& value = require(record, key, line);
  if (!value.is_string() || value.get<std::string>().empty()) {
    throw LoadError(std::string("'") + key + "' must be a non-empty string", line);
  }
  return value.get<std::string>();
}

std::size_t require_offset(const json& record, const char* key, std::size_t line) {
  const json& value = require(record, key, line);
  if (!value.is_number_unsigned()) {
    throw LoadError(std::string("'") + key + "' must be a non-negative integer", line);
  }
  return value.get<std::size_t>();
}

ordered_json optional_number(const std::optional<double>& value) {
  return value ? ordered_json(*value) : ordered_json(nullptr);
}

std::string percent_cell(const std::optional<double>& value, double scale) {
  if (!value) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", *value * scale);
  return buf;
}

}  // namespace

DatasetStats Dataset::stats() const {
  DatasetStats out;
  out.documents = documents.size();
  out.mentions = mentions.size();
  if (!documents.empty()) {
    double total = 0.0;
    for (const auto& doc : documents) total += static_cast<double>(utf8_length(doc.text));
    out.avg_characters = total / static_cast<double>(documents.size());
  }
  return out;
}

Dataset load_dataset(const std::filesystem::path& path, std::string name, std::size_t k_max) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open dataset " + path.string());
  Dataset dataset;
  dataset.name = name.empty() ? path.stem().string() : std::move(name);

  std::map<std::string, std::size_t> doc_index;
  std::set<std::string> mention_ids;
  std::vector<std::size_t> mention_lines;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json record = json::parse(line, nullptr, false);
    if (record.is_discarded() || !record.is_object()) {
      throw LoadError("not a JSON object", lineno);
    }
    std::string type = require_string(record, "type", lineno);
    if (type == "doc") {
      Document doc;
      doc.doc_id = require_string(record, "doc_id", lineno);
      const json& text = require(record, "text", lineno);
      if (!text.is_string()) throw LoadError("'text' must be a string", lineno);
      doc.text = text.get<std::string>();
      if (!doc_index.emplace(doc.doc_id, dataset.documents.size()).second) {
        throw LoadError("duplicate doc_id '" + doc.doc_id + "'", lineno);
      }
      dataset.documents.push_back(std::move(doc));
    } else if (type == "mention") {
      MentionRecord m;
      m.task.mention_id = require_string(record, "mention_id", lineno);
      m.doc_id = require_string(record, "doc_id", lineno);
      m.task.mention = require_string(record, "surface", lineno);
      m.start = require_offset(record, "start", lineno);
      m.end = require_offset(record, "end", lineno);
      if (!record.contains("gold") || record["gold"].is_null()) {
        throw LoadError("mention '" + m.task.mention_id + "' has no gold entity", lineno);
      }
      m.gold = require_string(record, "gold", lineno);
      m.task.gold = m.gold;
      const json& candidates = require(record, "candidates", lineno);
      if (!candidates.is_array() || candidates.empty()) {
        throw LoadError("'candidates' must be a non-empty array", lineno);
      }
      std::set<std::string> seen;
      for (const auto& c : candidates) {
        if (!c.is_string() || c.get<std::string>().empty()) {
          throw LoadError("candidates must be non-empty strings", lineno);
        }
        if (!seen.insert(c.get<std::string>()).second) {
          throw LoadError("duplicate candidate '" + c.get<std::string>() + "'", lineno);
        }
        m.task.candidates.push_back(c.get<std::string>());
      }
      if (m.task.candidates.size() > k_max) {
        throw LoadError("mention has " + std::to_string(m.task.candidates.size()) +
                            " candidates, more than k_max=" + std::to_string(k_max),
                        lineno);
      }
      if (m.end < m.start) throw LoadError("'end' precedes 'start'", lineno);
      if (!mention_ids.insert(m.task.mention_id).second) {
        throw LoadError("duplicate mention_id '" + m.task.mention_id + "'", lineno);
      }
      m.task.mention_start = m.start;
      dataset.mentions.push_back(std::move(m));
      mention_lines.push_back(lineno);
    } else {
      throw LoadError("unknown record type '" + type + "'", lineno);
    }
  }

  for (std::size_t i = 0; i < dataset.mentions.size(); ++i) {
    MentionRecord& m = dataset.mentions[i];
    auto it = doc_index.find(m.doc_id);
    if (it == doc_index.end()) {
      throw LoadError("mention '" + m.task.mention_id + "' references unknown doc '" + m.doc_id +
                          "'",
                      mention_lines[i]);
    }
    const std::string& text = dataset.documents[it->second].text;
    m.task.document = text;
    if (m.end > text.size()) {
      throw LoadError("mention offsets exceed the document length", mention_lines[i]);
    }
    if (lower(text.substr(m.start, m.end - m.start)) != lower(m.task.mention)) {
      dataset.warnings.push_back("mention '" + m.task.mention_id +
                                 "': surface does not match the document at its offsets");
    }
  }
  return dataset;
}

std::optional<double> micro_f1(std::size_t tp, std::size_t fp, std::size_t fn) {
  if (tp == 0 && fp == 0 && fn == 0) return std::nullopt;
  double t = static_cast<double>(tp);
  return t / (t + 0.5 * (static_cast<double>(fp) + static_cast<double>(fn)));
}

Counts ideal_counts(std::span<const MentionRecord> mentions, const TaxonomyStore& store) {
  Counts c;
  for (const auto& m : mentions) {
    if (!store.has_entity(m.gold)) continue;
    bool reachable =
        std::find(m.task.candidates.begin(), m.task.candidates.end(), m.gold) !=
        m.task.candidates.end();
    if (reachable) {
      ++c.tp;
    } else {
      ++c.fp;
      ++c.fn;
    }
  }
  return c;
}

std::optional<double> gold_f1(std::span<const MentionRecord> mentions,
                              const TaxonomyStore& store) {
  return micro_f1(ideal_counts(mentions, store));
}

double pct_gold(double micro, double gold) {
  if (!(gold > 0.0)) throw Error("%Gold is undefined for a zero Gold F1");
  return 100.0 * micro / gold;
}

double weighted_average(std::span<const double> scores, std::span<const double> weights) {
  if (scores.empty()) throw Error("weighted average of an empty set");
  if (scores.size() != weights.size()) throw Error("scores and weights differ in length");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!(weights[i] > 0.0)) throw Error("weights must be positive");
    num += weights[i] * scores[i];
    den += weights[i];
  }
  return num / den;
}

IterationStats iteration_stats(std::span<const DisambiguationTrace> traces) {
  if (traces.empty()) throw Error("iteration statistics need at least one trace");
  std::map<std::size_t, std::size_t> counts;
  for (const auto& t : traces) ++counts[t.iterations.size()];
  IterationStats out;
  out.traces = traces.size();
  for (const auto& [iterations, n] : counts) {
    double pct = 100.0 * static_cast<double>(n) / static_cast<double>(traces.size());
    out.histogram[iterations] = pct;
    out.mean += static_cast<double>(iterations) * pct / 100.0;
  }
  return out;
}

EvalRun run_eval(const Dataset& dataset, const TaxonomyStore& store, Selector& selector,
                 DescriptionSource& descriptions, const EvalOptions& options) {
  const std::size_t n = dataset.mentions.size();
  std::vector<DisambiguationTrace> traces(n);

  auto solve = [&](std::size_t i) {
    const MentionRecord& m = dataset.mentions[i];
    try {
      Disambiguation d = options.pipeline == Pipeline::kKg
                             ? disambiguate(m.task, store, selector, descriptions, options.pruning)
                             : baseline_disambiguate(m.task, selector, &descriptions,
                                                     options.baseline_descriptions,
                                                     options.pruning);
      traces[i] = std::move(d.trace);
    } catch (const DisambiguationError& e) {
      traces[i] = e.trace();
    } catch (const Error& e) {
      DisambiguationTrace t;
      t.mention_id = m.task.mention_id;
      t.pipeline = options.pipeline == Pipeline::kKg ? "kg" : "baseline";
      t.template_version = options.pruning.template_version;
      t.candidates = m.task.candidates;
      t.failed = true;
      t.error = e.what();
      traces[i] = std::move(t);
    }
  };

  std::size_t workers = std::clamp<std::size_t>(options.max_in_flight, 1, std::max<std::size_t>(n, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) solve(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) solve(i);
      });
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return dataset.mentions[a].task.mention_id < dataset.mentions[b].task.mention_id;
  });

  EvalRun run;
  run.metrics.name = dataset.name;
  std::vector<MentionRecord> in_kb;
  for (std::size_t i : order) {
    const MentionRecord& m = dataset.mentions[i];
    const DisambiguationTrace& t = traces[i];
    if (t.failed) ++run.metrics.failures;
    if (!store.has_entity(m.gold)) {
      ++run.metrics.non_in_kb_mentions;
      continue;
    }
    ++run.metrics.in_kb_mentions;
    if (!t.failed && t.result == m.gold) {
      ++run.metrics.counts.tp;
    } else {
      ++run.metrics.counts.fp;
      ++run.metrics.counts.fn;
    }
  }
  run.metrics.gold_counts = ideal_counts(dataset.mentions, store);
  run.metrics.micro_f1 = micro_f1(run.metrics.counts);
  run.metrics.gold_f1 = micro_f1(run.metrics.gold_counts);
  if (run.metrics.micro_f1 && run.metrics.gold_f1 && *run.metrics.gold_f1 > 0.0) {
    run.metrics.pct_gold = pct_gold(*run.metrics.micro_f1, *run.metrics.gold_f1);
  }
  for (std::size_t i : order) run.traces.push_back(std::move(traces[i]));
  return run;
}

MetricsReport build_report(std::span<const EvalRun> runs) {
  MetricsReport report;
  std::vector<DisambiguationTrace> finished;
  std::vector<double> micro, gold, pct, micro_w, gold_w, pct_w;
  for (const auto& run : runs) {
    report.per_dataset.push_back(run.metrics);
    const DatasetMetrics& m = run.metrics;
    double weight = static_cast<double>(m.in_kb_mentions);
    if (m.micro_f1) {
      micro.push_back(*m.micro_f1);
      micro_w.push_back(weight);
    }
    if (m.gold_f1) {
      gold.push_back(*m.gold_f1);
      gold_w.push_back(weight);
    }
    if (m.pct_gold) {
      pct.push_back(*m.pct_gold);
      pct_w.push_back(weight);
    }
    for (const auto& t : run.traces) {
      report.fallback_parse_count += t.fallback_parses;
      if (!t.failed) finished.push_back(t);
    }
  }
  auto plain = [](const std::vector<double>& v) -> std::optional<double> {
    if (v.empty()) return std::nullopt;
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  };
  auto weighted = [](const std::vector<double>& v,
                     const std::vector<double>& w) -> std::optional<double> {
    if (v.empty()) return std::nullopt;
    return weighted_average(v, w);
  };
  report.plain = {plain(micro), plain(gold), plain(pct)};
  report.weighted = {weighted(micro, micro_w), weighted(gold, gold_w), weighted(pct, pct_w)};
  if (!finished.empty()) report.iterations = iteration_stats(finished);
  return report;
}

std::string report_to_json(const MetricsReport& report) {
  ordered_json j;
  ordered_json per_dataset = ordered_json::object();
  for (const auto& m : report.per_dataset) {
    ordered_json d;
    d["tp"] = m.counts.tp;
    d["fp"] = m.counts.fp;
    d["fn"] = m.counts.fn;
    d["in_kb_mentions"] = m.in_kb_mentions;
    d["non_in_kb_mentions"] = m.non_in_kb_mentions;
    d["failures"] = m.failures;
    d["micro_f1"] = optional_number(m.micro_f1);
    d["gold_f1"] = optional_number(m.gold_f1);
    d["pct_gold"] = optional_number(m.pct_gold);
    d["gold_tp"] = m.gold_counts.tp;
    d["gold_fp"] = m.gold_counts.fp;
    d["gold_fn"] = m.gold_counts.fn;
    ordered_json tags = ordered_json::object();
    for (const auto& [tag, count] : m.error_tags) tags[tag] = count;
    d["error_tags"] = std::move(tags);
    per_dataset[m.name] = std::move(d);
  }
  j["per_dataset"] = std::move(per_dataset);
  auto averages = [](const AverageScores& a) {
    ordered_json o;
    o["micro_f1"] = optional_number(a.micro_f1);
    o["gold_f1"] = optional_number(a.gold_f1);
    o["pct_gold"] = optional_number(a.pct_gold);
    return o;
  };
  j["averages"] = {{"plain", averages(report.plain)}, {"weighted", averages(report.weighted)}};
  ordered_json histogram = ordered_json::object();
  if (report.iterations) {
    for (const auto& [count, pct] : report.iterations->histogram) {
      histogram[std::to_string(count)] = pct;
    }
  }
  j["iteration_histogram"] = std::move(histogram);
  j["mean_iterations"] =
      report.iterations ? ordered_json(report.iterations->mean) : ordered_json(nullptr);
  j["fallback_parse_count"] = report.fallback_parse_count;
  return j.dump(2) + "\n";
}

std::string report_to_tsv(const MetricsReport& report) {
  std::ostringstream out;
  out << "metric";
  for (const auto& m : report.per_dataset) out << '\t' << m.name;
  out << "\tAvg.\tWt. avg.\n";
  auto row = [&](const char* title, auto pick, double scale, const std::optional<double>& avg,
                 const std::optional<double>& wavg) {
    out << title;
    for (const auto& m : report.per_dataset) out << '\t' << percent_cell(pick(m), scale);
    out << '\t' << percent_cell(avg, scale) << '\t' << percent_cell(wavg, scale) << '\n';
  };
  row("F1-Score", [](const DatasetMetrics& m) { return m.micro_f1; }, 100.0,
      report.plain.micro_f1, report.weighted.micro_f1);
  row("Gold F1", [](const DatasetMetrics& m) { return m.gold_f1; }, 100.0, report.plain.gold_f1,
      report.weighted.gold_f1);
  row("%Gold", [](const DatasetMetrics& m) { return m.pct_gold; }, 1.0, report.plain.pct_gold,
      report.weighted.pct_gold);
  return out.str();
}

std::map<std::string, std::string> load_error_tags(const std::filesystem::path& path) {
  static const std::set<std::string> kTags = {"llm", "ambiguous", "kg", "ground_truth"};
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open error-tag overlay " + path.string());
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json record = json::parse(line, nullptr, false);
    if (record.is_discarded() || !record.is_object()) throw LoadError("not a JSON object", lineno);
    std::string id = require_string(record, "mention_id", lineno);
    std::string tag = require_string(record, "tag", lineno);
    if (!kTags.contains(tag)) throw LoadError("unknown error tag '" + tag + "'", lineno);
    out[id] = tag;
  }
  return out;
}

void apply_error_tags(DatasetMetrics& metrics, const Dataset& dataset,
                      const std::map<std::string, std::string>& tags) {
  for (const auto& m : dataset.mentions) {
    auto it = tags.find(m.task.mention_id);
    if (it != tags.end()) ++metrics.error_tags[it->second];
  }
}

}  // namespace kged
