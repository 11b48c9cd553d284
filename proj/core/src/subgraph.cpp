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

#include "kged/subgraph.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <sstream>
#include <unordered_set>

#include "kged/error.hpp"

namespace kged {
namespace {

const std::set<std::string> kNoNodes;
constexpr std::size_t kNotCandidate = std::numeric_limits<std::size_t>::max();

// Fixed-width bitset sized at runtime; the graphs here have tens of nodes.
class Bits {
 public:
  explicit Bits(std::size_t n) : words_((n + 63) / 64, 0) {}
  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }
  Bits& operator|=(const Bits& other) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
    return *this;
  }

 private:
  std::vector<std::uint64_t> words_;
};

// Kahn order over all nodes. Throws GraphError on a cycle.
std::vector<std::string> topological_order(const CandidateDag& dag) {
  std::map<std::string, std::size_t, std::less<>> indegree;
  for (const auto& label : dag.nodes()) {
    std::size_t n = dag.predecessors(label).size();
    if (dag.has_edge(label, label)) --n;
    indegree[label] = n;
  }
  std::deque<std::string> ready;
  for (const auto& [label, n] : indegree) {
    if (n == 0) ready.push_back(label);
  }
  std::vector<std::string> order;
  order.reserve(indegree.size());
  while (!ready.empty()) {
    std::string label = std::move(ready.front());
    ready.pop_front();
    for (const auto& child : dag.successors(label)) {
      if (child == label) continue;
      if (--indegree[child] == 0) ready.push_back(child);
    }
    order.push_back(std::move(label));
  }
  if (order.size() != indegree.size()) throw GraphError("graph contains a cycle");
  return order;
}

// Longest distance from the root for every node reachable from it.
std::map<std::string, std::size_t, std::less<>> longest_depths(const CandidateDag& dag) {
  std::map<std::string, std::size_t, std::less<>> out{{dag.root(), 0}};
  for (const auto& label : topological_order(dag)) {
    auto it = out.find(label);
    if (it == out.end()) continue;
    for (const auto& child : dag.successors(label)) {
      auto [slot, inserted] = out.try_emplace(child, it->second + 1);
      if (!inserted) slot->second = std::max(slot->second, it->second + 1);
    }
  }
  return out;
}

std::set<std::string> ancestors_or_self(const CandidateDag& dag, const std::string& node) {
  std::set<std::string> out{node};
  std::vector<std::string> stack{node};
  while (!stack.empty()) {
    std::string current = std::move(stack.back());
    stack.pop_back();
    for (const auto& parent : dag.predecessors(current)) {
      if (out.insert(parent).second) stack.push_back(parent);
    }
  }
  return out;
}

std::set<std::string> reachable_from(const CandidateDag& dag, const std::string& start) {
  std::set<std::string> out{start};
  std::vector<std::string> stack{start};
  while (!stack.empty()) {
    std::string current = std::move(stack.back());
    stack.pop_back();
    for (const auto& child : dag.successors(current)) {
      if (out.insert(child).second) stack.push_back(child);
    }
  }
  return out;
}

bool reaches(const CandidateDag& dag, const std::string& from, const std::string& to) {
  return reachable_from(dag, from).contains(to);
}

// Candidates that have successors become leaves; their successors are
// re-attached to the candidate's predecessors.
void normalize_entities_as_classes(CandidateDag& dag) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& candidate : dag.candidate_order()) {
      if (!dag.contains(candidate) || dag.successors(candidate).empty()) continue;
      std::set<std::string> successors = dag.successors(candidate);
      std::set<std::string> predecessors = dag.predecessors(candidate);
      for (const auto& child : successors) dag.remove_edge(candidate, child);
      for (const auto& parent : predecessors) {
        for (const auto& child : successors) dag.add_edge(parent, child);
      }
      changed = true;
    }
  }
}

// Removes non-root classes whose only successor is a class, smallest label
// first, until none is left. The input must be transitively reduced; the
// output stays reduced because a replacement edge is only added when no other
// route exists.
void collapse_chains(CandidateDag& dag) {
  while (true) {
    std::optional<std::string> victim;
    for (const auto& label : dag.nodes()) {
      if (label == dag.root() || dag.kind(label) != NodeKind::kClass) continue;
      const auto& succ = dag.successors(label);
      if (succ.size() == 1 && dag.kind(*succ.begin()) == NodeKind::kClass) {
        victim = label;
        break;
      }
    }
    if (!victim) return;
    std::string child = *dag.successors(*victim).begin();
    std::set<std::string> predecessors = dag.predecessors(*victim);
    dag.remove_node(*victim);
    for (const auto& parent : predecessors) {
      if (!reaches(dag, parent, child)) dag.add_edge(parent, child);
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// CandidateDag

CandidateDag::CandidateDag(std::vector<std::string> candidate_order)
    : root_(kThing), candidate_order_(std::move(candidate_order)) {
  nodes_.emplace(root_, Node{NodeKind::kClass, {}, {}});
  for (std::size_t i = 0; i < candidate_order_.size(); ++i) {
    rank_.emplace(candidate_order_[i], i);
  }
}

const CandidateDag::Node& CandidateDag::node(std::string_view label) const {
  auto it = nodes_.find(label);
  if (it == nodes_.end()) throw GraphError("unknown node '" + std::string(label) + "'");
  return it->second;
}

CandidateDag::Node& CandidateDag::node(std::string_view label) {
  auto it = nodes_.find(label);
  if (it == nodes_.end()) throw GraphError("unknown node '" + std::string(label) + "'");
  return it->second;
}

void CandidateDag::add_node(const std::string& label, NodeKind kind) {
  auto [it, inserted] = nodes_.try_emplace(label, Node{kind, {}, {}});
  if (!inserted && it->second.kind != kind) {
    throw GraphError("node '" + label + "' already exists with a different kind");
  }
}

void CandidateDag::add_edge(const std::string& parent, const std::string& child) {
  Node& p = node(parent);
  Node& c = node(child);
  p.successors.insert(child);
  c.predecessors.insert(parent);
}

void CandidateDag::remove_edge(const std::string& parent, const std::string& child) {
  node(parent).successors.erase(child);
  node(child).predecessors.erase(parent);
}

void CandidateDag::remove_node(const std::string& label) {
  if (label == root_) throw GraphError("cannot remove the root");
  auto it = nodes_.find(label);
  if (it == nodes_.end()) throw GraphError("unknown node '" + label + "'");
  for (const auto& child : it->second.successors) {
    if (child != label) nodes_.at(child).predecessors.erase(label);
  }
  for (const auto& parent : it->second.predecessors) {
    if (parent != label) nodes_.at(parent).successors.erase(label);
  }
  nodes_.erase(it);
}

bool CandidateDag::has_edge(std::string_view parent, std::string_view child) const {
  auto it = nodes_.find(parent);
  return it != nodes_.end() && it->second.successors.contains(std::string(child));
}

NodeKind CandidateDag::kind(std::string_view label) const { return node(label).kind; }

const std::set<std::string>& CandidateDag::successors(std::string_view label) const {
  return node(label).successors;
}

const std::set<std::string>& CandidateDag::predecessors(std::string_view label) const {
  return node(label).predecessors;
}

std::size_t CandidateDag::edge_count() const {
  std::size_t n = 0;
  for (const auto& [label, entry] : nodes_) n += entry.successors.size();
  return n;
}

std::vector<std::string> CandidateDag::nodes() const {
  std::vector<std::string> out;
  out.reserve(nodes_.size());
  for (const auto& [label, entry] : nodes_) out.push_back(label);
  return out;
}

std::vector<std::pair<std::string, std::string>> CandidateDag::edges() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [label, entry] : nodes_) {
    for (const auto& child : entry.successors) out.emplace_back(label, child);
  }
  return out;
}

std::size_t CandidateDag::candidate_rank(std::string_view label) const {
  auto it = rank_.find(std::string(label));
  return it == rank_.end() ? kNotCandidate : it->second;
}

void CandidateDag::sort_deterministic(std::vector<std::string>& labels) const {
  std::sort(labels.begin(), labels.end(), [this](const std::string& a, const std::string& b) {
    std::size_t ra = candidate_rank(a);
    std::size_t rb = candidate_rank(b);
    if (ra != rb) return ra < rb;
    return a < b;
  });
}

bool CandidateDag::operator==(const CandidateDag& other) const {
  if (nodes_.size() != other.nodes_.size()) return false;
  for (const auto& [label, entry] : nodes_) {
    auto it = other.nodes_.find(label);
    if (it == other.nodes_.end() || it->second.kind != entry.kind ||
        it->second.successors != entry.successors) {
      return false;
    }
  }
  return true;
}

std::string_view to_string(SuccessorKind kind) {
  switch (kind) {
    case SuccessorKind::kAllClasses:
      return "all_classes";
    case SuccessorKind::kAllEntities:
      return "all_entities";
    case SuccessorKind::kMixed:
      return "mixed";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Operations

CandidateDag build_subgraph(const TaxonomyStore& store, std::span<const std::string> candidates) {
  if (candidates.empty()) throw GraphError("empty candidate list");
  std::unordered_set<std::string> seen;
  for (const auto& c : candidates) {
    if (c.empty()) throw GraphError("empty candidate label");
    if (c == kThing) throw GraphError("'Thing' cannot be a candidate");
    if (!seen.insert(c).second) throw GraphError("duplicate candidate '" + c + "'");
  }

  CandidateDag dag({candidates.begin(), candidates.end()});
  for (const auto& c : candidates) dag.add_node(c, NodeKind::kEntity);

  // Step 1: typings plus the full ancestor closure.
  std::unordered_set<std::string> expanded;
  for (const auto& c : candidates) {
    if (store.parents(c).empty()) {
      dag.add_edge(dag.root(), c);
      continue;
    }
    std::vector<std::string> stack{c};
    while (!stack.empty()) {
      std::string current = std::move(stack.back());
      stack.pop_back();
      if (!expanded.insert(current).second) continue;
      for (const auto& parent : store.parents(current)) {
        if (!dag.contains(parent)) dag.add_node(parent, NodeKind::kClass);
        dag.add_edge(parent, current);
        stack.push_back(parent);
      }
    }
  }

  // Step 2: classes that are not ancestors of any candidate. Closure from
  // candidates only ever adds ancestors, so this is a safeguard for stores
  // whose typings reach classes through non-candidate entities.
  std::set<std::string> keep;
  for (const auto& c : candidates) {
    auto up = ancestors_or_self(dag, c);
    keep.insert(up.begin(), up.end());
  }
  for (const auto& label : dag.nodes()) {
    if (label != dag.root() && !keep.contains(label)) dag.remove_node(label);
  }

  // Step 3: transitive reduction and self-loops, then entity-as-class
  // normalization, whose re-attached edges may themselves be implied.
  dag = transitive_reduce(dag);
  normalize_entities_as_classes(dag);
  dag = transitive_reduce(dag);

  // Step 4.
  collapse_chains(dag);
  return dag;
}

CandidateDag transitive_reduce(const CandidateDag& dag) {
  CandidateDag out = dag;
  for (const auto& label : out.nodes()) {
    if (out.has_edge(label, label)) out.remove_edge(label, label);
  }
  std::vector<std::string> order = topological_order(out);
  std::unordered_map<std::string, std::size_t> position;
  for (std::size_t i = 0; i < order.size(); ++i) position.emplace(order[i], i);

  // descendants[i]: strict descendants of order[i].
  std::vector<Bits> descendants(order.size(), Bits(order.size()));
  for (std::size_t i = order.size(); i-- > 0;) {
    for (const auto& child : out.successors(order[i])) {
      std::size_t j = position.at(child);
      descendants[i].set(j);
      descendants[i] |= descendants[j];
    }
  }

  for (const auto& label : order) {
    std::vector<std::string> redundant;
    const auto& succ = out.successors(label);
    for (const auto& target : succ) {
      std::size_t t = position.at(target);
      for (const auto& other : succ) {
        if (other != target && descendants[position.at(other)].test(t)) {
          redundant.push_back(target);
          break;
        }
      }
    }
    for (const auto& target : redundant) out.remove_edge(label, target);
  }
  return out;
}

std::size_t depth(const CandidateDag& dag, std::string_view node) {
  if (!dag.contains(node)) throw GraphError("unknown node '" + std::string(node) + "'");
  auto depths = longest_depths(dag);
  auto it = depths.find(node);
  if (it == depths.end()) {
    throw GraphError("node '" + std::string(node) + "' is not reachable from the root");
  }
  return it->second;
}

LcaResult lca_with_ties(const CandidateDag& dag, std::span<const std::string> leaves) {
  if (leaves.empty()) throw GraphError("lca of an empty node set");
  for (const auto& leaf : leaves) {
    if (!dag.contains(leaf)) throw GraphError("unknown node '" + leaf + "'");
  }
  std::set<std::string> common = ancestors_or_self(dag, leaves.front());
  for (std::size_t i = 1; i < leaves.size() && !common.empty(); ++i) {
    auto up = ancestors_or_self(dag, leaves[i]);
    std::set<std::string> next;
    std::set_intersection(common.begin(), common.end(), up.begin(), up.end(),
                          std::inserter(next, next.end()));
    common = std::move(next);
  }

  auto depths = longest_depths(dag);
  LcaResult result;
  std::optional<std::size_t> best;
  for (const auto& label : common) {  // ascending label order
    auto it = depths.find(label);
    if (it == depths.end()) continue;
    if (!best || it->second > *best) {
      best = it->second;
      result.ties.clear();
    }
    if (it->second == *best) result.ties.push_back(label);
  }
  if (result.ties.empty()) throw GraphError("nodes have no common ancestor reachable from the root");
  result.node = result.ties.front();
  return result;
}

std::string lca(const CandidateDag& dag, std::span<const std::string> leaves) {
  return lca_with_ties(dag, leaves).node;
}

SuccessorCase successor_case(const CandidateDag& dag, std::string_view lca_node) {
  const auto& succ = dag.successors(lca_node);
  if (succ.empty()) throw GraphError("'" + std::string(lca_node) + "' is a leaf");
  SuccessorCase out;
  for (const auto& child : succ) {
    if (dag.kind(child) == NodeKind::kEntity) {
      out.entity_successors.push_back(child);
    } else {
      out.class_successors.push_back(child);
    }
  }
  dag.sort_deterministic(out.entity_successors);
  if (out.entity_successors.empty()) {
    out.kind = SuccessorKind::kAllClasses;
  } else if (out.class_successors.empty()) {
    out.kind = SuccessorKind::kAllEntities;
  } else {
    out.kind = SuccessorKind::kMixed;
  }
  return out;
}

CandidateDag prune(const CandidateDag& dag, const std::set<std::string>& nodes) {
  for (const auto& label : nodes) {
    if (label == dag.root()) throw GraphError("cannot prune the root");
    if (!dag.contains(label)) throw GraphError("unknown node '" + label + "'");
  }
  CandidateDag out = dag;
  for (const auto& label : nodes) out.remove_node(label);

  std::set<std::string> reachable = reachable_from(out, out.root());
  std::set<std::string> useful;
  std::vector<std::string> stack;
  for (const auto& label : reachable) {
    if (out.kind(label) == NodeKind::kEntity) {
      useful.insert(label);
      stack.push_back(label);
    }
  }
  if (stack.empty()) throw GraphError("pruning would leave no candidate");
  while (!stack.empty()) {
    std::string current = std::move(stack.back());
    stack.pop_back();
    for (const auto& parent : out.predecessors(current)) {
      if (reachable.contains(parent) && useful.insert(parent).second) stack.push_back(parent);
    }
  }
  for (const auto& label : out.nodes()) {
    if (label != out.root() && !useful.contains(label)) out.remove_node(label);
  }
  return out;
}

std::vector<std::string> leaves(const CandidateDag& dag) {
  std::vector<std::string> out;
  for (const auto& label : dag.nodes()) {
    if (label != dag.root() && dag.successors(label).empty()) out.push_back(label);
  }
  dag.sort_deterministic(out);
  return out;
}

void check_invariants(const CandidateDag& dag) {
  topological_order(dag);
  for (const auto& label : dag.nodes()) {
    if (dag.has_edge(label, label)) throw GraphError("self-loop on '" + label + "'");
  }
  if (!dag.predecessors(dag.root()).empty()) throw GraphError("root has predecessors");
  std::set<std::string> reachable = reachable_from(dag, dag.root());
  for (const auto& label : dag.nodes()) {
    if (label == dag.root()) continue;
    if (!reachable.contains(label)) {
      throw GraphError("'" + label + "' is not reachable from the root");
    }
    bool leaf = dag.successors(label).empty();
    if (dag.kind(label) == NodeKind::kEntity) {
      if (!leaf) throw GraphError("entity '" + label + "' has successors");
      if (dag.candidate_rank(label) == kNotCandidate) {
        throw GraphError("leaf '" + label + "' is not a candidate");
      }
    } else if (leaf) {
      throw GraphError("class '" + label + "' has no successors");
    }
  }
  if (leaves(dag).empty()) throw GraphError("dag has no leaves");
}

std::string export_edge_list(const CandidateDag& dag) {
  std::ostringstream out;
  for (const auto& [parent, child] : dag.edges()) {
    out << parent << '\t' << child << '\t'
        << (dag.kind(child) == NodeKind::kEntity ? "entity" : "class") << '\n';
  }
  return out.str();
}

}  // namespace kged
