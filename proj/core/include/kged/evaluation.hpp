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

#ifndef KGED_EVALUATION_HPP_
#define KGED_EVALUATION_HPP_

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kged/descriptions.hpp"
#include "kged/pruning.hpp"
#include "kged/selector.hpp"
#include "kged/taxonomy.hpp"
#include "kged/trace.hpp"

namespace kged {

struct Document {
  std::string doc_id;
  std::string text;
};

struct MentionRecord {
  std::string doc_id;
  std::size_t start = 0;
  std::size_t end = 0;
  std::string gold;
  DisambiguationTask task;  // task.gold mirrors `gold`
};

struct DatasetStats {
  std::size_t documents = 0;
  std::size_t mentions = 0;
  double avg_characters = 0.0;  // mean document length in code points
};

struct Dataset {
  std::string name;
  std::vector<Document> documents;
  std::vector<MentionRecord> mentions;
  std::vector<std::string> warnings;

  DatasetStats stats() const;
};

// JSON Lines with `{"type":"doc",...}` and `{"type":"mention",...}` records.
// `name` defaults to the file stem. Throws LoadError with the line number for
// schema violations, missing gold labels, dangling doc references and
// candidate lists longer than `k_max`.
Dataset load_dataset(const std::filesystem::path& path, std::string name = "",
                     std::size_t k_max = kDefaultCandidateLimit);

struct Counts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
};

// TP / (TP + (FP + FN) / 2); nullopt when every count is zero.
std::optional<double> micro_f1(std::size_t tp, std::size_t fp, std::size_t fn);
inline std::optional<double> micro_f1(const Counts& c) { return micro_f1(c.tp, c.fp, c.fn); }

// Counts of the ideal single-prediction system over in-KB mentions: right
// whenever the gold entity is among the candidates, one FP and one FN
// otherwise. Mentions whose gold is not in the store are skipped.
Counts ideal_counts(std::span<const MentionRecord> mentions, const TaxonomyStore& store);
std::optional<double> gold_f1(std::span<const MentionRecord> mentions, const TaxonomyStore& store);

// 100 * micro / gold. Throws Error when gold <= 0.
double pct_gold(double micro, double gold);

// Sum(w * s) / Sum(w). Throws Error on empty input, a length mismatch or a
// non-positive weight.
double weighted_average(std::span<const double> scores, std::span<const double> weights);

struct IterationStats {
  std::map<std::size_t, double> histogram;  // iteration count -> percent
  double mean = 0.0;
  std::size_t traces = 0;
};

// Throws Error on an empty input.
IterationStats iteration_stats(std::span<const DisambiguationTrace> traces);

enum class Pipeline { kKg, kBaseline };

struct EvalOptions {
  Pipeline pipeline = Pipeline::kKg;
  PruningOptions pruning;
  bool baseline_descriptions = false;
  std::size_t max_in_flight = 1;
};

struct DatasetMetrics {
  std::string name;
  Counts counts;
  Counts gold_counts;
  std::size_t in_kb_mentions = 0;
  std::size_t non_in_kb_mentions = 0;
  std::size_t failures = 0;
  std::optional<double> micro_f1;
  std::optional<double> gold_f1;
  std::optional<double> pct_gold;
  std::map<std::string, std::size_t> error_tags;
};

struct EvalRun {
  DatasetMetrics metrics;
  // One per mention, sorted by mention id.
  std::vector<DisambiguationTrace> traces;
};

// Disambiguates every mention with up to `max_in_flight` workers. Selector and
// task failures are recorded per mention and scored as FP + FN. The result
// does not depend on the worker count.
EvalRun run_eval(const Dataset& dataset, const TaxonomyStore& store, Selector& selector,
                 DescriptionSource& descriptions, const EvalOptions& options);

struct AverageScores {
  std::optional<double> micro_f1;
  std::optional<double> gold_f1;
  std::optional<double> pct_gold;
};

struct MetricsReport {
  std::vector<DatasetMetrics> per_dataset;
  AverageScores plain;
  AverageScores weighted;  // weights: in-KB mention counts
  std::optional<IterationStats> iterations;
  std::size_t fallback_parse_count = 0;
};

MetricsReport build_report(std::span<const EvalRun> runs);

// Stable key order; F1 values as fractions, %Gold as a percentage.
std::string report_to_json(const MetricsReport& report);
// Tab-separated F1-Score / Gold F1 / %Gold rows, one column per dataset.
std::string report_to_tsv(const MetricsReport& report);

// Error-tag overlay: JSON Lines {mention_id, tag}; tag is one of llm,
// ambiguous, kg, ground_truth.
std::map<std::string, std::string> load_error_tags(const std::filesystem::path& path);
void apply_error_tags(DatasetMetrics& metrics, const Dataset& dataset,
                      const std::map<std::string, std::string>& tags);

}  // namespace kged

#endif  // KGED_EVALUATION_HPP_
