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

#ifndef KGED_SUBGRAPH_HPP_
#define KGED_SUBGRAPH_HPP_

#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "kged/taxonomy.hpp"

namespace kged {

enum class NodeKind { kClass, kEntity };

// Per-mention pruning DAG rooted at `Thing`.
//
// The container itself only guarantees that the root exists and that labels
// are unique; the structural invariants (acyclic, single source, entity
// leaves, no dangling classes) are established by build_subgraph() and kept
// by prune(), and can be checked with check_invariants().
class CandidateDag {
 public:
  // `candidate_order` fixes the deterministic order of entity nodes.
  explicit CandidateDag(std::vector<std::string> candidate_order = {});

  const std::string& root() const { return root_; }

  // No-op if the node exists with the same kind. Throws GraphError on a kind
  // conflict.
  void add_node(const std::string& label, NodeKind kind);
  // Both endpoints must exist.
  void add_edge(const std::string& parent, const std::string& child);
  void remove_edge(const std::string& parent, const std::string& child);
  // Removes the node and all incident edges. The root cannot be removed.
  void remove_node(const std::string& label);

  bool contains(std::string_view label) const { return nodes_.contains(label); }
  bool has_edge(std::string_view parent, std::string_view child) const;
  NodeKind kind(std::string_view label) const;
  const std::set<std::string>& successors(std::string_view label) const;
  const std::set<std::string>& predecessors(std::string_view label) const;

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const;
  // Labels in ascending order.
  std::vector<std::string> nodes() const;
  // (parent, child) pairs, sorted.
  std::vector<std::pair<std::string, std::string>> edges() const;

  const std::vector<std::string>& candidate_order() const { return candidate_order_; }
  // Position in the candidate list; candidates sort before everything else.
  std::size_t candidate_rank(std::string_view label) const;

  // Sorts entities by candidate rank, then everything else by label.
  void sort_deterministic(std::vector<std::string>& labels) const;

  // Same nodes, kinds and edges.
  bool operator==(const CandidateDag& other) const;

 private:
  struct Node {
    NodeKind kind;
    std::set<std::string> successors;
    std::set<std::string> predecessors;
  };

  const Node& node(std::string_view label) const;
  Node& node(std::string_view label);

  std::string root_;
  std::map<std::string, Node, std::less<>> nodes_;
  std::vector<std::string> candidate_order_;
  std::unordered_map<std::string, std::size_t> rank_;
};

enum class SuccessorKind { kAllClasses, kAllEntities, kMixed };

std::string_view to_string(SuccessorKind kind);

struct SuccessorCase {
  SuccessorKind kind;
  std::vector<std::string> class_successors;   // label order
  std::vector<std::string> entity_successors;  // candidate order
};

struct LcaResult {
  std::string node;
  // Every common ancestor at the maximal depth, including `node`.
  std::vector<std::string> ties;
};

// Runs the four construction steps for one mention's candidates:
// typing and ancestor closure, removal of classes that are not ancestors of a
// candidate, transitive reduction (with entity-as-class normalization), and
// collapse of single-class-successor chains. Candidates unknown to the store
// hang directly off the root. Throws GraphError for an empty, duplicated or
// root-named candidate list.
CandidateDag build_subgraph(const TaxonomyStore& store, std::span<const std::string> candidates);

// Removes every edge implied by a longer path, and self-loops. Throws
// GraphError if the graph has a cycle.
CandidateDag transitive_reduce(const CandidateDag& dag);

// Longest root-to-node path length.
std::size_t depth(const CandidateDag& dag, std::string_view node);

// Deepest common ancestor-or-self of `leaves`; ties go to the smallest label.
LcaResult lca_with_ties(const CandidateDag& dag, std::span<const std::string> leaves);
std::string lca(const CandidateDag& dag, std::span<const std::string> leaves);

SuccessorCase successor_case(const CandidateDag& dag, std::string_view lca_node);

// Removes `nodes` and then everything that no longer lies on a root-to-leaf
// path ending in an entity. Throws GraphError when asked to remove the root,
// an unknown node, or every leaf.
CandidateDag prune(const CandidateDag& dag, const std::set<std::string>& nodes);

// Nodes without successors, entities first in candidate order.
std::vector<std::string> leaves(const CandidateDag& dag);

// Throws GraphError describing the first violated invariant.
void check_invariants(const CandidateDag& dag);

// `parent<TAB>child<TAB>kind` lines, sorted by parent then child; `kind` is
// the child's node kind ("class" or "entity").
std::string export_edge_list(const CandidateDag& dag);

}  // namespace kged

#endif  // KGED_SUBGRAPH_HPP_
