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

#include "kged/trace.hpp"

#include "json.hpp"
#include "kged/error.hpp"

namespace kged {
namespace {

using nlohmann::ordered_json;

ordered_json to_json(const QueryRecord& q) {
  ordered_json j;
  j["kind"] = q.kind;
  j["options"] = q.options;
  j["selection"] = q.selection;
  j["selection_kind"] = q.selection_kind;
  j["raw_response"] = q.raw_response;
  j["parse_status"] = q.parse_status;
  j["retries"] = q.retries;
  j["missing_descriptions"] = q.missing_descriptions;
  return j;
}

ordered_json to_json(const IterationRecord& it) {
  ordered_json j;
  j["lca"] = it.lca;
  j["lca_ties"] = it.lca_ties;
  j["case"] = it.case_kind;
  j["options_shown"] = it.options_shown;
  j["sentinel_used"] = it.sentinel_used;
  ordered_json queries = ordered_json::array();
  for (const auto& q : it.queries) queries.push_back(to_json(q));
  j["queries"] = std::move(queries);
  j["pruned"] = it.pruned;
  j["leaves_before"] = it.leaves_before;
  j["leaves_after"] = it.leaves_after;
  j["assessment_triggered"] = it.assessment_triggered;
  j["forced_progress"] = it.forced_progress;
  return j;
}

template <typename T>
T field(const ordered_json& j, const char* key) {
  if (!j.contains(key)) throw LoadError(std::string("trace is missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw LoadError(std::string("trace field '") + key + "' has the wrong type");
  }
}

}  // namespace

std::string trace_to_json(const DisambiguationTrace& trace) {
  ordered_json j;
  j["mention_id"] = trace.mention_id;
  j["pipeline"] = trace.pipeline;
  j["template_version"] = trace.template_version;
  j["candidates"] = trace.candidates;
  ordered_json iterations = ordered_json::array();
  for (const auto& it : trace.iterations) iterations.push_back(to_json(it));
  j["iterations"] = std::move(iterations);
  j["total_selector_calls"] = trace.total_selector_calls;
  j["class_queries"] = trace.class_queries;
  j["entity_queries"] = trace.entity_queries;
  j["assessment_queries"] = trace.assessment_queries;
  j["retries"] = trace.retries;
  j["fallback_parses"] = trace.fallback_parses;
  j["assessment_triggered"] = trace.assessment_triggered;
  j["result"] = trace.result;
  j["failed"] = trace.failed;
  j["error"] = trace.error;
  j["warnings"] = trace.warnings;
  return j.dump(2) + "\n";
}

DisambiguationTrace trace_from_json(std::string_view text) {
  ordered_json j = ordered_json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw LoadError("trace is not a JSON object");
  DisambiguationTrace t;
  t.mention_id = field<std::string>(j, "mention_id");
  t.pipeline = field<std::string>(j, "pipeline");
  t.template_version = field<std::string>(j, "template_version");
  t.candidates = field<std::vector<std::string>>(j, "candidates");
  for (const auto& ij : field<ordered_json>(j, "iterations")) {
    IterationRecord it;
    it.lca = field<std::string>(ij, "lca");
    it.lca_ties = field<std::vector<std::string>>(ij, "lca_ties");
    it.case_kind = field<std::string>(ij, "case");
    it.options_shown = field<std::vector<std::string>>(ij, "options_shown");
    it.sentinel_used = field<std::string>(ij, "sentinel_used");
    for (const auto& qj : field<ordered_json>(ij, "queries")) {
      QueryRecord q;
      q.kind = field<std::string>(qj, "kind");
      q.options = field<std::vector<std::string>>(qj, "options");
      q.selection = field<std::string>(qj, "selection");
      q.selection_kind = field<std::string>(qj, "selection_kind");
      q.raw_response = field<std::string>(qj, "raw_response");
      q.parse_status = field<std::string>(qj, "parse_status");
      q.retries = field<int>(qj, "retries");
      q.missing_descriptions = field<std::vector<std::string>>(qj, "missing_descriptions");
      it.queries.push_back(std::move(q));
    }
    it.pruned = field<std::vector<std::string>>(ij, "pruned");
    it.leaves_before = field<std::size_t>(ij, "leaves_before");
    it.leaves_after = field<std::size_t>(ij, "leaves_after");
    it.assessment_triggered = field<bool>(ij, "assessment_triggered");
    it.forced_progress = field<bool>(ij, "forced_progress");
    t.iterations.push_back(std::move(it));
  }
  t.total_selector_calls = field<std::size_t>(j, "total_selector_calls");
  t.class_queries = field<std::size_t>(j, "class_queries");
  t.entity_queries = field<std::size_t>(j, "entity_queries");
  t.assessment_queries = field<std::size_t>(j, "assessment_queries");
  t.retries = field<std::size_t>(j, "retries");
  t.fallback_parses = field<std::size_t>(j, "fallback_parses");
  t.assessment_triggered = field<bool>(j, "assessment_triggered");
  t.result = field<std::string>(j, "result");
  t.failed = field<bool>(j, "failed");
  t.error = field<std::string>(j, "error");
  t.warnings = field<std::vector<std::string>>(j, "warnings");
  return t;
}

}  // namespace kged
