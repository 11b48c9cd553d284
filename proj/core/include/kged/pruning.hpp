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

#ifndef KGED_PRUNING_HPP_
#define KGED_PRUNING_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "kged/descriptions.hpp"
#include "kged/error.hpp"
#include "kged/selector.hpp"
#include "kged/taxonomy.hpp"
#include "kged/trace.hpp"

namespace kged {

inline constexpr std::size_t kDefaultCandidateLimit = 10;

struct DisambiguationTask {
  std::string mention_id;
  std::string mention;
  std::string document;
  std::optional<std::size_t> mention_start;  // byte offset into `document`
  std::vector<std::string> candidates;
  // Evaluation only; handed to the selector context, never rendered.
  std::optional<std::string> gold;
};

struct PruningOptions {
  std::size_t k_max = kDefaultCandidateLimit;
  std::size_t desc_limit = kDefaultDescriptionLimit;
  std::size_t context_window = 2000;
  std::string template_version{kDefaultTemplateVersion};
  // Let class queries pick several classes. Off: one class or None.
  bool multi_select_classes = false;
};

struct Disambiguation {
  std::string entity;
  DisambiguationTrace trace;
};

// A selector failure that aborted a run. Carries the trace up to the failing
// call.
class DisambiguationError : public Error {
 public:
  DisambiguationError(const std::string& what, SelectorError::Kind kind,
                      DisambiguationTrace trace)
      : Error(what), kind_(kind), trace_(std::move(trace)) {}

  SelectorError::Kind kind() const { return kind_; }
  const DisambiguationTrace& trace() const { return trace_; }

 private:
  SelectorError::Kind kind_;
  DisambiguationTrace trace_;
};

// Throws Error for an empty, duplicated or oversized candidate list. A
// mention missing from the document only produces a warning.
std::vector<std::string> validate_task(const DisambiguationTask& task, std::size_t k_max);

// Taxonomy-guided pruning.
//
// Each iteration takes the LCA of the remaining candidate leaves and looks at
// its direct successors:
//   - all classes: pick one class or None. None falls back to an entity
//     query over every remaining candidate.
//   - all entities: pick the entity directly, with descriptions.
//   - mixed: pick one class or Other; Other drops the classes, a class drops
//     everything else.
// When a class-level step leaves one candidate, that candidate is put to an
// assessment query and a rejection reruns the iteration as an entity query.
// An iteration that removes no candidate is finished with an entity query,
// so the loop runs at most |candidates| times.
Disambiguation disambiguate(const DisambiguationTask& task, const TaxonomyStore& store,
                            Selector& selector, DescriptionSource& descriptions,
                            const PruningOptions& options = {});

// Non-enhanced baseline: a single entity query over all candidates.
// `descriptions` may be null; when `include_descriptions` is false it is
// ignored and the prompt carries labels only.
Disambiguation baseline_disambiguate(const DisambiguationTask& task, Selector& selector,
                                     DescriptionSource* descriptions, bool include_descriptions,
                                     const PruningOptions& options = {});

}  // namespace kged

#endif  // KGED_PRUNING_HPP_
