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

#ifndef KGED_TRACE_HPP_
#define KGED_TRACE_HPP_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace kged {

// One question put to the selector and what came back.
struct QueryRecord {
  std::string kind;                  // class_choice, entity_choice, ...
  std::vector<std::string> options;  // labels, sentinel last when present
  std::string selection;             // chosen label(s), sentinel, accept or reject
  std::string selection_kind;        // option, sentinel, accept, reject
  std::string raw_response;
  std::string parse_status;
  int retries = 0;
  // Entities whose description could not be served, as "label:status".
  std::vector<std::string> missing_descriptions;
};

struct IterationRecord {
  std::string lca;
  std::vector<std::string> lca_ties;
  std::string case_kind;  // all_classes, all_entities, mixed, baseline
  std::vector<std::string> options_shown;
  std::string sentinel_used = "none";  // None, Other or none
  std::vector<QueryRecord> queries;
  std::vector<std::string> pruned;  // every node removed during the iteration
  std::size_t leaves_before = 0;
  std::size_t leaves_after = 0;
  bool assessment_triggered = false;
  bool forced_progress = false;
};

struct DisambiguationTrace {
  std::string mention_id;
  std::string pipeline;  // kg or baseline
  std::string template_version;
  std::vector<std::string> candidates;
  std::vector<IterationRecord> iterations;
  std::size_t total_selector_calls = 0;
  std::size_t class_queries = 0;
  std::size_t entity_queries = 0;
  std::size_t assessment_queries = 0;
  std::size_t retries = 0;
  std::size_t fallback_parses = 0;
  bool assessment_triggered = false;
  std::string result;
  bool failed = false;
  std::string error;
  std::vector<std::string> warnings;
};

// Stable key order, two-space indentation, trailing newline.
std::string trace_to_json(const DisambiguationTrace& trace);
// Throws LoadError for malformed input.
DisambiguationTrace trace_from_json(std::string_view text);

}  // namespace kged

#endif  // KGED_TRACE_HPP_
