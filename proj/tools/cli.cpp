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

#include "cli.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "kged/descriptions.hpp"
#include "kged/error.hpp"
#include "kged/evaluation.hpp"
#include "kged/http_backend.hpp"
#include "kged/pruning.hpp"
#include "kged/selector.hpp"
#include "kged/taxonomy.hpp"
#include "kged/trace.hpp"

namespace kged::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

constexpr const char* kToolVersion = "1.0.0";

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << content;
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr);
  std::string out;
  char byte[3];
  for (unsigned int i = 0; i < length; ++i) {
    std::snprintf(byte, sizeof byte, "%02x", digest[i]);
    out += byte;
  }
  return out;
}

std::string sha256_file_or_empty(const fs::path& path) {
  if (path.empty() || !fs::exists(path)) return "";
  return sha256_hex(read_file(path));
}

// Trace file name for a mention id.
std::string safe_name(std::string_view id) {
  std::string out;
  for (char c : id) {
    bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
    out.push_back(ok ? c : '_');
  }
  return out.empty() ? "_" : out;
}

void validate(const RunConfig& c) {
  if (c.backend != "http" && c.backend != "mock" && c.backend != "oracle") {
    throw ConfigError("--backend must be http, mock or oracle");
  }
  if (c.pipeline != "kg" && c.pipeline != "baseline") {
    throw ConfigError("--pipeline must be kg or baseline");
  }
  if (c.offline && c.backend == "http") {
    throw ConfigError("--offline allows only the mock and oracle backends");
  }
  if (c.backend == "mock" && c.mock_script.empty()) {
    throw ConfigError("--backend mock needs --mock-script");
  }
  if (c.k_max == 0) throw ConfigError("--k-max must be positive");
  if (c.desc_limit == 0) throw ConfigError("--desc-limit must be positive");
  if (c.max_in_flight == 0) throw ConfigError("--max-in-flight must be positive");
  if (c.template_version != kDefaultTemplateVersion) {
    throw ConfigError("unknown --template-version '" + c.template_version + "'");
  }
}

std::unique_ptr<Selector> make_selector(const RunConfig& c, const TaxonomyStore& store) {
  if (c.backend == "oracle") return std::make_unique<OracleSelector>(store);
  if (c.backend == "mock") {
    return std::make_unique<MockSelector>(MockSelector::load(c.resolve(c.mock_script)));
  }
  HttpBackendConfig http;
  http.endpoint = c.endpoint;
  http.model = c.model;
  http.api_key_env = c.api_key_env;
  http.retry.max_retries = c.max_retries;
  http.max_in_flight = c.max_in_flight;
  http.min_request_interval = std::chrono::milliseconds(c.min_request_interval_ms);
  if (!std::getenv(c.api_key_env.c_str())) {
    throw ConfigError("environment variable " + c.api_key_env + " is not set");
  }
  return std::make_unique<HttpSelector>(http, std::shared_ptr<HttpTransport>(make_default_transport()));
}

std::unique_ptr<DescriptionStore> make_descriptions(const RunConfig& c) {
  std::unique_ptr<KbFetcher> fetcher;
  if (!c.offline) {
    HttpKbConfig kb;
    kb.url_template = c.kb_url_template;
    kb.field_path = c.kb_field_path;
    kb.retry.max_retries = c.max_retries;
    fetcher = std::make_unique<HttpKbFetcher>(kb, std::shared_ptr<HttpTransport>(make_default_transport()));
  }
  return std::make_unique<DescriptionStore>(c.resolve(c.description_cache), std::move(fetcher),
                                            DescriptionStore::Options{c.offline});
}

PruningOptions pruning_options(const RunConfig& c) {
  PruningOptions p;
  p.k_max = c.k_max;
  p.desc_limit = c.desc_limit;
  p.context_window = c.context_window;
  p.template_version = c.template_version;
  p.multi_select_classes = c.multi_select;
  return p;
}

ordered_json config_json(const RunConfig& c) {
  ordered_json j;
  j["kg_snapshot"] = c.kg_snapshot.string();
  ordered_json datasets = ordered_json::array();
  for (const auto& d : c.datasets) datasets.push_back(d.string());
  j["dataset"] = std::move(datasets);
  j["backend"] = c.backend;
  j["pipeline"] = c.pipeline;
  j["k_max"] = c.k_max;
  j["desc_limit"] = c.desc_limit;
  j["context_window"] = c.context_window;
  j["max_in_flight"] = c.max_in_flight;
  j["output_dir"] = c.output_dir.string();
  j["offline"] = c.offline;
  j["template_version"] = c.template_version;
  j["mock_script"] = c.mock_script.string();
  j["description_cache"] = c.description_cache.string();
  j["error_tags"] = c.error_tags.string();
  j["baseline_descriptions"] = c.baseline_descriptions;
  j["multi_select"] = c.multi_select;
  j["endpoint"] = c.endpoint;
  j["model"] = c.model;
  j["api_key_env"] = c.api_key_env;
  j["max_retries"] = c.max_retries;
  j["min_request_interval_ms"] = c.min_request_interval_ms;
  j["kb_url_template"] = c.kb_url_template;
  j["kb_field_path"] = c.kb_field_path;
  return j;
}

void add_run_flags(CLI::App* cmd, RunConfig& c) {
  cmd->add_option("--workspace", c.workspace, "Root for relative paths");
  cmd->add_option("--kg-snapshot", c.kg_snapshot, "Taxonomy snapshot (TSV)")->required();
  cmd->add_option("--backend", c.backend, "http | mock | oracle");
  cmd->add_option("--pipeline", c.pipeline, "kg | baseline");
  cmd->add_option("--k-max", c.k_max, "Maximum candidates per mention");
  cmd->add_option("--desc-limit", c.desc_limit, "Description length in characters");
  cmd->add_option("--context-window", c.context_window, "Document excerpt size");
  cmd->add_option("--max-in-flight", c.max_in_flight, "Concurrent selector calls");
  cmd->add_option("--output-dir", c.output_dir, "Where reports and traces go");
  cmd->add_flag("--offline", c.offline, "No network: mock/oracle backends, cached descriptions");
  cmd->add_option("--template-version", c.template_version, "Prompt template revision");
  cmd->add_option("--mock-script", c.mock_script, "JSON Lines script for --backend mock");
  cmd->add_option("--description-cache", c.description_cache, "JSON Lines description cache");
  cmd->add_option("--record-script", c.record_script,
                  "Write the answers given as a mock script");
  cmd->add_flag("--baseline-descriptions", c.baseline_descriptions,
                "Give the baseline entity descriptions");
  cmd->add_flag("--multi-select", c.multi_select, "Allow several classes per class query");
  cmd->add_option("--endpoint", c.endpoint, "Chat-completion endpoint");
  cmd->add_option("--model", c.model, "Model name sent to the endpoint");
  cmd->add_option("--api-key-env", c.api_key_env, "Environment variable with the API key");
  cmd->add_option("--max-retries", c.max_retries, "Retries for transient HTTP failures");
  cmd->add_option("--min-request-interval-ms", c.min_request_interval_ms,
                  "Minimum spacing between selector requests");
  cmd->add_option("--kb-url-template", c.kb_url_template, "Description endpoint with {entity}");
  cmd->add_option("--kb-field-path", c.kb_field_path, "Dotted JSON path of the summary text");
}

// ---------------------------------------------------------------------------

int cmd_stats(const fs::path& snapshot, bool as_json, std::ostream& out) {
  TaxonomyStore store = TaxonomyStore::load(snapshot);
  SnapshotStats stats = store.compute_stats();
  if (as_json) {
    ordered_json j;
    j["source"] = store.source_name();
    j["instances"] = stats.instance_count;
    j["classes"] = stats.class_count;
    j["avg_tree_depth"] = stats.avg_tree_depth;
    j["avg_branching_factor"] = stats.avg_branching_factor;
    out << j.dump(2) << '\n';
    return kOk;
  }
  char line[64];
  out << "source\t" << store.source_name() << '\n';
  out << "instances\t" << stats.instance_count << '\n';
  out << "classes\t" << stats.class_count << '\n';
  std::snprintf(line, sizeof line, "%.6f", stats.avg_tree_depth);
  out << "avg_tree_depth\t" << line << '\n';
  std::snprintf(line, sizeof line, "%.6f", stats.avg_branching_factor);
  out << "avg_branching_factor\t" << line << '\n';
  return kOk;
}

struct MentionArgs {
  std::string mention_id = "cli";
  std::string mention;
  std::string document;
  fs::path document_file;
  std::vector<std::string> candidates;
  std::string candidate_list;
  std::string gold;
  long mention_start = -1;
};

int cmd_run(RunConfig c, const MentionArgs& args, std::ostream& out) {
  validate(c);
  DisambiguationTask task;
  task.mention_id = args.mention_id;
  task.mention = args.mention;
  task.document = args.document_file.empty() ? args.document : read_file(c.resolve(args.document_file));
  task.candidates = args.candidates;
  if (!args.candidate_list.empty()) {
    std::stringstream list(args.candidate_list);
    std::string item;
    while (std::getline(list, item, ',')) {
      if (!item.empty()) task.candidates.push_back(item);
    }
  }
  if (task.candidates.empty()) throw ConfigError("no candidates given");
  if (!args.gold.empty()) task.gold = args.gold;
  if (args.mention_start >= 0) task.mention_start = static_cast<std::size_t>(args.mention_start);
  if (c.backend == "oracle" && !task.gold) throw ConfigError("--backend oracle needs --gold");

  TaxonomyStore store = TaxonomyStore::load(c.resolve(c.kg_snapshot));
  std::unique_ptr<Selector> selector = make_selector(c, store);
  std::unique_ptr<DescriptionStore> descriptions = make_descriptions(c);
  RecordingSelector recorder(*selector);
  Selector& active = c.record_script.empty() ? *selector : recorder;

  PruningOptions options = pruning_options(c);
  fs::path trace_path = c.resolve(c.output_dir) / "traces" / (safe_name(task.mention_id) + ".json");
  try {
    Disambiguation result =
        c.pipeline == "kg"
            ? disambiguate(task, store, active, *descriptions, options)
            : baseline_disambiguate(task, active, descriptions.get(), c.baseline_descriptions,
                                    options);
    write_file(trace_path, trace_to_json(result.trace));
    if (!c.record_script.empty()) write_file(c.resolve(c.record_script), recorder.script_jsonl());
    out << result.entity << '\n';
    out << "trace\t" << trace_path.string() << '\n';
    return kOk;
  } catch (const DisambiguationError& e) {
    write_file(trace_path, trace_to_json(e.trace()));
    throw;
  }
}

int cmd_eval(RunConfig c, std::ostream& out, std::ostream& err) {
  validate(c);
  if (c.datasets.empty()) throw ConfigError("eval needs at least one --dataset");
  fs::path output = c.resolve(c.output_dir);

  // The manifest records input hashes as they were before the run.
  ordered_json manifest;
  manifest["tool_version"] = kToolVersion;
  manifest["command"] = "eval";
  manifest["config"] = config_json(c);
  manifest["template_version"] = c.template_version;
  manifest["snapshot_sha256"] = sha256_file_or_empty(c.resolve(c.kg_snapshot));
  ordered_json dataset_hashes = ordered_json::array();
  for (const auto& d : c.datasets) {
    dataset_hashes.push_back({{"path", d.string()}, {"sha256", sha256_file_or_empty(c.resolve(d))}});
  }
  manifest["datasets"] = std::move(dataset_hashes);
  manifest["mock_script_sha256"] = sha256_file_or_empty(c.resolve(c.mock_script));
  manifest["description_cache_sha256"] = sha256_file_or_empty(c.resolve(c.description_cache));

  TaxonomyStore store = TaxonomyStore::load(c.resolve(c.kg_snapshot));
  std::vector<Dataset> datasets;
  for (const auto& d : c.datasets) {
    datasets.push_back(load_dataset(c.resolve(d), "", c.k_max));
    for (const auto& w : datasets.back().warnings) err << "warning: " << w << '\n';
  }
  std::map<std::string, std::string> tags;
  if (!c.error_tags.empty()) tags = load_error_tags(c.resolve(c.error_tags));

  std::unique_ptr<Selector> selector = make_selector(c, store);
  std::unique_ptr<DescriptionStore> descriptions = make_descriptions(c);
  RecordingSelector recorder(*selector);
  Selector& active = c.record_script.empty() ? *selector : recorder;

  EvalOptions options;
  options.pipeline = c.pipeline == "kg" ? Pipeline::kKg : Pipeline::kBaseline;
  options.pruning = pruning_options(c);
  options.baseline_descriptions = c.baseline_descriptions;
  options.max_in_flight = c.max_in_flight;

  std::vector<EvalRun> runs;
  std::size_t failures = 0;
  for (const auto& dataset : datasets) {
    EvalRun run = run_eval(dataset, store, active, *descriptions, options);
    if (!tags.empty()) apply_error_tags(run.metrics, dataset, tags);
    failures += run.metrics.failures;
    for (const auto& t : run.traces) {
      write_file(output / "traces" / safe_name(dataset.name) / (safe_name(t.mention_id) + ".json"),
                 trace_to_json(t));
      if (t.failed) err << "failed: " << dataset.name << '/' << t.mention_id << ": " << t.error << '\n';
    }
    runs.push_back(std::move(run));
  }
  MetricsReport report = build_report(runs);
  write_file(output / "report.json", report_to_json(report));
  if (c.tsv) write_file(output / "report.tsv", report_to_tsv(report));
  write_file(output / "manifest.json", manifest.dump(2) + "\n");
  if (!c.record_script.empty()) write_file(c.resolve(c.record_script), recorder.script_jsonl());

  out << report_to_tsv(report);
  out << "report\t" << (output / "report.json").string() << '\n';
  if (failures > 0) out << "failures\t" << failures << '\n';
  return kOk;
}

int cmd_warm_cache(RunConfig c, std::ostream& out) {
  if (c.offline) throw ConfigError("warm-cache needs network access; drop --offline");
  if (c.description_cache.empty()) throw ConfigError("warm-cache needs --description-cache");
  if (c.datasets.empty()) throw ConfigError("warm-cache needs at least one --dataset");
  std::unique_ptr<DescriptionStore> descriptions = make_descriptions(c);
  std::map<std::string, std::size_t> statuses;
  std::set<std::string> seen;
  for (const auto& d : c.datasets) {
    Dataset dataset = load_dataset(c.resolve(d), "", c.k_max);
    for (const auto& m : dataset.mentions) {
      for (const auto& candidate : m.task.candidates) {
        if (!seen.insert(candidate).second) continue;
        ++statuses[std::string(to_string(descriptions->lookup(candidate).status))];
      }
    }
  }
  for (const auto& [status, n] : statuses) out << status << '\t' << n << '\n';
  out << "cache_entries\t" << descriptions->size() << '\n';
  return statuses.contains("fetch_failed") ? kBackendError : kOk;
}

int cmd_trace(const std::vector<fs::path>& inputs, std::ostream& out) {
  std::vector<fs::path> files;
  for (const auto& p : inputs) {
    if (fs::is_directory(p)) {
      for (const auto& entry : fs::recursive_directory_iterator(p)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") {
          files.push_back(entry.path());
        }
      }
    } else {
      files.push_back(p);
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw ConfigError("no trace files given");

  std::vector<DisambiguationTrace> traces;
  for (const auto& f : files) traces.push_back(trace_from_json(read_file(f)));

  if (traces.size() == 1) {
    const DisambiguationTrace& t = traces.front();
    out << "mention\t" << t.mention_id << '\n';
    out << "pipeline\t" << t.pipeline << '\n';
    out << "result\t" << t.result << (t.failed ? " (failed: " + t.error + ")" : "") << '\n';
    for (std::size_t i = 0; i < t.iterations.size(); ++i) {
      const IterationRecord& it = t.iterations[i];
      out << "iteration " << i + 1 << "\tlca=" << it.lca << "\tcase=" << it.case_kind
          << "\tleaves=" << it.leaves_before << "->" << it.leaves_after;
      for (const auto& q : it.queries) out << "\t" << q.kind << ":" << q.selection;
      out << '\n';
    }
    out << "selector_calls\t" << t.total_selector_calls << '\n';
    return kOk;
  }

  std::vector<DisambiguationTrace> finished;
  for (const auto& t : traces) {
    if (!t.failed) finished.push_back(t);
  }
  if (finished.empty()) throw LoadError("every trace records a failed run");
  IterationStats stats = iteration_stats(finished);
  char buf[64];
  out << "traces\t" << stats.traces << '\n';
  for (const auto& [count, pct] : stats.histogram) {
    std::snprintf(buf, sizeof buf, "%.2f", pct);
    out << "iterations=" << count << '\t' << buf << "%\n";
  }
  std::snprintf(buf, sizeof buf, "%.2f", stats.mean);
  out << "mean_iterations\t" << buf << '\n';
  return kOk;
}

template <typename F>
int guarded(F&& body, std::ostream& err) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DisambiguationError& e) {
    err << "backend error: " << e.what() << '\n';
    return kBackendError;
  } catch (const SelectorError& e) {
    err << "backend error: " << e.what() << '\n';
    return kBackendError;
  } catch (const Error& e) {
    err << "data error: " << e.what() << '\n';
    return kDataError;
  } catch (const fs::filesystem_error& e) {
    err << "io error: " << e.what() << '\n';
    return kConfigError;
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Knowledge-graph guided entity disambiguation"};
  app.require_subcommand(1);

  fs::path stats_snapshot;
  bool stats_json = false;
  CLI::App* stats = app.add_subcommand("stats", "Print snapshot statistics");
  stats->add_option("snapshot", stats_snapshot, "Taxonomy snapshot")->required();
  stats->add_flag("--json", stats_json, "Emit JSON");

  RunConfig run_config;
  MentionArgs mention;
  CLI::App* run = app.add_subcommand("run", "Disambiguate one mention");
  add_run_flags(run, run_config);
  run->add_option("--mention-id", mention.mention_id, "Identifier used in the trace");
  run->add_option("--mention", mention.mention, "Mention surface text")->required();
  auto* doc = run->add_option("--document", mention.document, "Document text");
  auto* doc_file = run->add_option("--document-file", mention.document_file, "Document file");
  doc->excludes(doc_file);
  run->add_option("--candidate", mention.candidates, "Candidate entity (repeatable)");
  run->add_option("--candidates", mention.candidate_list, "Comma-separated candidates");
  run->add_option("--gold", mention.gold, "Gold entity (oracle backend only)");
  run->add_option("--mention-start", mention.mention_start, "Byte offset of the mention");

  RunConfig eval_config;
  CLI::App* eval = app.add_subcommand("eval", "Evaluate a pipeline on datasets");
  add_run_flags(eval, eval_config);
  eval->add_option("--dataset", eval_config.datasets, "Dataset JSON Lines (repeatable)")->required();
  eval->add_option("--error-tags", eval_config.error_tags, "Error-tag overlay JSON Lines");
  eval->add_flag("--tsv", eval_config.tsv, "Also write report.tsv");

  RunConfig warm_config;
  CLI::App* warm = app.add_subcommand("warm-cache", "Fetch descriptions for every candidate");
  warm->add_option("--workspace", warm_config.workspace, "Root for relative paths");
  warm->add_option("--dataset", warm_config.datasets, "Dataset JSON Lines (repeatable)")->required();
  warm->add_option("--description-cache", warm_config.description_cache, "Cache file")->required();
  warm->add_option("--k-max", warm_config.k_max, "Maximum candidates per mention");
  warm->add_flag("--offline", warm_config.offline, "Rejected: warming needs the network");
  warm->add_option("--max-retries", warm_config.max_retries, "Retries for transient failures");
  warm->add_option("--kb-url-template", warm_config.kb_url_template, "Endpoint with {entity}");
  warm->add_option("--kb-field-path", warm_config.kb_field_path, "Dotted JSON path");

  std::vector<fs::path> trace_inputs;
  CLI::App* trace = app.add_subcommand("trace", "Summarize trace files or directories");
  trace->add_option("paths", trace_inputs, "Trace files or directories")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  if (*stats) return guarded([&] { return cmd_stats(stats_snapshot, stats_json, out); }, err);
  if (*run) return guarded([&] { return cmd_run(run_config, mention, out); }, err);
  if (*eval) return guarded([&] { return cmd_eval(eval_config, out, err); }, err);
  if (*warm) return guarded([&] { return cmd_warm_cache(warm_config, out); }, err);
  return guarded([&] { return cmd_trace(trace_inputs, out); }, err);
}

}  // namespace kged::cli
