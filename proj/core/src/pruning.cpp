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

#include "kged/pruning.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <unordered_set>

#include "kged/subgraph.hpp"

namespace kged {
namespace {

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

struct Answer {
  ChoiceQuery query;
  Selection selection;
};

// State of one mention's run: the growing trace and the call ordinal.
class Run {
 public:
  Run(const DisambiguationTask& task, Selector& selector, DescriptionSource* descriptions,
      const PruningOptions& options, std::string pipeline)
      : task_(task), selector_(selector), descriptions_(descriptions), options_(options) {
    trace_.mention_id = task.mention_id;
    trace_.pipeline = std::move(pipeline);
    trace_.template_version = options.template_version;
    trace_.candidates = task.candidates;
  }

  DisambiguationTrace& trace() { return trace_; }

  Answer ask(QueryKind kind, const std::vector<std::string>& labels, IterationRecord& iteration) {
    QueryConfig config;
    config.template_version = options_.template_version;
    config.desc_limit = options_.desc_limit;
    config.context_window = options_.context_window;
    config.mention_start = task_.mention_start;
    config.multi_select = options_.multi_select_classes;
    Answer answer{build_query(kind, task_.mention, task_.document, labels, descriptions_, config),
                  {}};

    SelectionContext context{task_.mention_id, ordinal_++, task_.gold};
    try {
      answer.selection = selector_.select(answer.query, context);
    } catch (const SelectorError& e) {
      DisambiguationTrace partial = trace_;
      partial.iterations.push_back(iteration);
      partial.failed = true;
      partial.error = e.what();
      throw DisambiguationError(e.what(), e.kind(), std::move(partial));
    }
    sanitize(answer);

    ++trace_.total_selector_calls;
    switch (kind) {
      case QueryKind::kClassChoice:
      case QueryKind::kMixedChoice:
        ++trace_.class_queries;
        break;
      case QueryKind::kEntityChoice:
        ++trace_.entity_queries;
        break;
      case QueryKind::kAssessment:
        ++trace_.assessment_queries;
        break;
    }
    trace_.retries += static_cast<std::size_t>(std::max(answer.selection.retries, 0));
    if (answer.selection.parse_status == ParseStatus::kFallback) ++trace_.fallback_parses;

    QueryRecord record;
    record.kind = std::string(to_string(kind));
    for (const auto& option : answer.query.options) {
      record.options.push_back(option.label);
      if (option.description_status && !option.description) {
        record.missing_descriptions.push_back(option.label + ":" +
                                              std::string(to_string(*option.description_status)));
      }
    }
    record.selection = chosen_labels_joined(answer);
    record.selection_kind = std::string(to_string(answer.selection.kind));
    record.raw_response = answer.selection.raw_response;
    record.parse_status = std::string(to_string(answer.selection.parse_status));
    record.retries = answer.selection.retries;
    if (iteration.queries.empty()) {
      iteration.options_shown = record.options;
    }
    iteration.queries.push_back(std::move(record));
    return answer;
  }

  // Entity query over `labels`; returns the chosen entity.
  std::string entity_query(const std::vector<std::string>& labels, IterationRecord& iteration) {
    Answer answer = ask(QueryKind::kEntityChoice, labels, iteration);
    return answer.query.options[answer.selection.index - 1].label;
  }

  static std::vector<std::string> chosen_labels(const Answer& answer) {
    std::vector<std::string> out;
    for (std::size_t i : answer.selection.indices) {
      if (answer.query.sentinel_index() == i) continue;
      out.push_back(answer.query.options[i - 1].label);
    }
    return out;
  }

 private:
  // Third-party selectors may return out-of-range indices; treat them like an
  // unparseable answer.
  static void sanitize(Answer& answer) {
    Selection& s = answer.selection;
    const std::size_t n = answer.query.options.size();
    if (answer.query.kind == QueryKind::kAssessment) {
      if (s.kind != SelectionKind::kAccept && s.kind != SelectionKind::kReject) {
        s.kind = SelectionKind::kAccept;
        s.parse_status = ParseStatus::kFallback;
      }
      return;
    }
    bool valid = (s.kind == SelectionKind::kOption || s.kind == SelectionKind::kSentinel) &&
                 s.index >= 1 && s.index <= n;
    if (valid) {
      auto bad = [n](std::size_t i) { return i < 1 || i > n; };
      std::erase_if(s.indices, bad);
      if (s.indices.empty()) s.indices = {s.index};
      if (!answer.query.multi_select && s.indices.size() > 1) s.indices = {s.index};
      bool is_sentinel = answer.query.sentinel_index() == s.index;
      s.kind = is_sentinel ? SelectionKind::kSentinel : SelectionKind::kOption;
      if (is_sentinel) s.indices = {s.index};
      return;
    }
    s.index = answer.query.sentinel_index().value_or(1);
    s.indices = {s.index};
    s.kind = answer.query.sentinel_index() ? SelectionKind::kSentinel : SelectionKind::kOption;
    s.parse_status = ParseStatus::kFallback;
  }

  static std::string chosen_labels_joined(const Answer& answer) {
    if (answer.query.kind == QueryKind::kAssessment ||
        answer.selection.kind == SelectionKind::kSentinel) {
      return selected_label(answer.selection, answer.query);
    }
    std::string out;
    for (const auto& label : chosen_labels(answer)) out += (out.empty() ? "" : ",") + label;
    return out;
  }

  const DisambiguationTask& task_;
  Selector& selector_;
  DescriptionSource* descriptions_;
  const PruningOptions& options_;
  DisambiguationTrace trace_;
  std::size_t ordinal_ = 0;
};

std::set<std::string> minus(const std::vector<std::string>& all,
                            const std::vector<std::string>& keep) {
  std::set<std::string> out(all.begin(), all.end());
  for (const auto& k : keep) out.erase(k);
  return out;
}

std::vector<std::string> removed_nodes(const CandidateDag& before, const CandidateDag& after) {
  std::vector<std::string> out;
  for (const auto& label : before.nodes()) {
    if (!after.contains(label)) out.push_back(label);
  }
  return out;
}

}  // namespace

std::vector<std::string> validate_task(const DisambiguationTask& task, std::size_t k_max) {
  if (task.candidates.empty()) throw Error("mention '" + task.mention_id + "' has no candidates");
  if (task.candidates.size() > k_max) {
    throw Error("mention '" + task.mention_id + "' has " +
                std::to_string(task.candidates.size()) + " candidates, more than k_max=" +
                std::to_string(k_max));
  }
  std::unordered_set<std::string> seen;
  for (const auto& c : task.candidates) {
    if (c.empty()) throw Error("mention '" + task.mention_id + "' has an empty candidate");
    if (!seen.insert(c).second) {
      throw Error("mention '" + task.mention_id + "' lists candidate '" + c + "' twice");
    }
  }
  std::vector<std::string> warnings;
  if (lower(task.document).find(lower(task.mention)) == std::string::npos) {
    warnings.push_back("mention '" + task.mention + "' does not occur in the document");
  }
  return warnings;
}

Disambiguation disambiguate(const DisambiguationTask& task, const TaxonomyStore& store,
                            Selector& selector, DescriptionSource& descriptions,
                            const PruningOptions& options) {
  Run run(task, selector, &descriptions, options, "kg");
  run.trace().warnings = validate_task(task, options.k_max);

  if (task.candidates.size() == 1) {
    run.trace().result = task.candidates.front();
    return {task.candidates.front(), run.trace()};
  }

  CandidateDag dag = build_subgraph(store, task.candidates);
  std::vector<std::string> current = leaves(dag);
  while (current.size() != 1) {
    if (current.empty()) throw Error("internal error: candidate graph has no leaves");
    if (run.trace().iterations.size() > task.candidates.size()) {
      throw Error("internal error: pruning exceeded the iteration bound");
    }

    IterationRecord iteration;
    iteration.leaves_before = current.size();
    LcaResult lca = lca_with_ties(dag, current);
    iteration.lca = lca.node;
    iteration.lca_ties = lca.ties;
    SuccessorCase successors = successor_case(dag, lca.node);
    iteration.case_kind = std::string(to_string(successors.kind));

    CandidateDag next = dag;
    bool class_level = false;
    switch (successors.kind) {
      case SuccessorKind::kAllClasses: {
        Answer answer = run.ask(QueryKind::kClassChoice, successors.class_successors, iteration);
        if (answer.selection.kind == SelectionKind::kSentinel) {
          iteration.sentinel_used = std::string(to_string(Sentinel::kNone));
          std::string chosen = run.entity_query(current, iteration);
          next = prune(dag, minus(current, {chosen}));
        } else {
          next = prune(dag, minus(successors.class_successors, Run::chosen_labels(answer)));
          class_level = true;
        }
        break;
      }
      case SuccessorKind::kAllEntities: {
        std::string chosen = run.entity_query(successors.entity_successors, iteration);
        next = prune(dag, minus(successors.entity_successors, {chosen}));
        break;
      }
      case SuccessorKind::kMixed: {
        Answer answer = run.ask(QueryKind::kMixedChoice, successors.class_successors, iteration);
        if (answer.selection.kind == SelectionKind::kSentinel) {
          iteration.sentinel_used = std::string(to_string(Sentinel::kOther));
          next = prune(dag, {successors.class_successors.begin(),
                             successors.class_successors.end()});
        } else {
          std::vector<std::string> all = successors.class_successors;
          all.insert(all.end(), successors.entity_successors.begin(),
                     successors.entity_successors.end());
          next = prune(dag, minus(all, Run::chosen_labels(answer)));
        }
        class_level = true;
        break;
      }
    }

    std::vector<std::string> remaining = leaves(next);
    if (class_level && remaining.size() == 1) {
      iteration.assessment_triggered = true;
      run.trace().assessment_triggered = true;
      Answer verdict = run.ask(QueryKind::kAssessment, remaining, iteration);
      if (verdict.selection.kind == SelectionKind::kReject) {
        std::string chosen = run.entity_query(current, iteration);
        next = prune(dag, minus(current, {chosen}));
      }
    } else if (remaining.size() >= current.size()) {
      iteration.forced_progress = true;
      std::string chosen = run.entity_query(remaining, iteration);
      next = prune(next, minus(remaining, {chosen}));
    }

    iteration.pruned = removed_nodes(dag, next);
    dag = std::move(next);
    current = leaves(dag);
    iteration.leaves_after = current.size();
    run.trace().iterations.push_back(std::move(iteration));
  }

  run.trace().result = current.front();
  return {current.front(), run.trace()};
}

Disambiguation baseline_disambiguate(const DisambiguationTask& task, Selector& selector,
                                     DescriptionSource* descriptions, bool include_descriptions,
                                     const PruningOptions& options) {
  Run run(task, selector, include_descriptions ? descriptions : nullptr, options, "baseline");
  run.trace().warnings = validate_task(task, options.k_max);
  if (task.candidates.size() == 1) {
    run.trace().result = task.candidates.front();
    return {task.candidates.front(), run.trace()};
  }
  IterationRecord iteration;
  iteration.case_kind = "baseline";
  iteration.leaves_before = task.candidates.size();
  std::string chosen = run.entity_query(task.candidates, iteration);
  for (const auto& c : task.candidates) {
    if (c != chosen) iteration.pruned.push_back(c);
  }
  std::sort(iteration.pruned.begin(), iteration.pruned.end());
  iteration.leaves_after = 1;
  run.trace().iterations.push_back(std::move(iteration));
  run.trace().result = chosen;
  return {chosen, run.trace()};
}

}  // namespace kged
