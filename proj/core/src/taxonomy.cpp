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

#include "kged/taxonomy.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "kged/error.hpp"

namespace kged {
namespace {

const std::set<std::string> kEmptySet;

std::vector<std::string> split_tabs(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.emplace_back(line.substr(start));
      return fields;
    }
    fields.emplace_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

}  // namespace

TaxonomyStore TaxonomyStore::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open snapshot " + path.string());
  return parse(in, path.filename().string());
}

TaxonomyStore TaxonomyStore::parse(std::istream& in, std::string source_name) {
  TaxonomyStore store;
  store.source_name_ = std::move(source_name);

  // First line each label was seen in a class position / entity position,
  // kept for diagnostics.
  std::map<std::string, std::size_t> class_use;
  std::map<std::string, std::size_t> entity_use;
  std::map<std::string, std::size_t> ec_line;

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;

    auto fields = split_tabs(line);
    const std::string& kind = fields[0];
    std::size_t expected = kind == "EC" ? 2 : 3;
    if (kind != "SC" && kind != "TY" && kind != "EC") {
      throw LoadError("unknown record kind '" + kind + "' in record '" + line + "'", lineno);
    }
    if (fields.size() != expected) {
      throw LoadError("expected " + std::to_string(expected) + " fields in record '" + line + "'",
                      lineno);
    }
    for (std::size_t i = 1; i < fields.size(); ++i) {
      if (fields[i].empty()) throw LoadError("empty label in record '" + line + "'", lineno);
    }

    if (kind == "SC") {
      store.subclass_edges_.emplace(fields[1], fields[2]);
      class_use.emplace(fields[1], lineno);
      class_use.emplace(fields[2], lineno);
    } else if (kind == "TY") {
      store.entity_types_[fields[1]].insert(fields[2]);
      entity_use.emplace(fields[1], lineno);
      class_use.emplace(fields[2], lineno);
    } else {
      store.entity_as_class_.insert(fields[1]);
      ec_line.emplace(fields[1], lineno);
    }
  }

  if (!class_use.contains(std::string(kThing))) {
    throw LoadError("snapshot has no class labeled 'Thing'");
  }
  if (auto it = entity_use.find(std::string(kThing)); it != entity_use.end()) {
    throw LoadError("'Thing' cannot be typed as an entity", it->second);
  }
  for (const auto& [label, at] : ec_line) {
    if (!entity_use.contains(label)) {
      throw LoadError("EC entity '" + label + "' has no TY record", at);
    }
  }
  for (const auto& [label, at] : class_use) {
    if (entity_use.contains(label) && !store.entity_as_class_.contains(label)) {
      throw LoadError("entity '" + label + "' used as a class without an EC declaration", at);
    }
  }

  store.index();

  // Cycle check over the whole hierarchy (subclass edges plus typings).
  enum class Mark { kNone, kActive, kDone };
  std::unordered_map<std::string, Mark> mark;
  std::vector<std::string> path;
  auto visit = [&](auto&& self, const std::string& node) -> void {
    mark[node] = Mark::kActive;
    path.push_back(node);
    for (const auto& parent : store.parents(node)) {
      Mark m = mark[parent];
      if (m == Mark::kActive) {
        std::string cycle;
        auto from = std::find(path.begin(), path.end(), parent);
        for (auto it = from; it != path.end(); ++it) cycle += *it + " -> ";
        cycle += parent;
        throw LoadError("cycle in subclass relation: " + cycle);
      }
      if (m == Mark::kNone) self(self, parent);
    }
    path.pop_back();
    mark[node] = Mark::kDone;
  };
  for (const auto& [node, unused] : store.parents_) {
    if (mark[node] == Mark::kNone) visit(visit, node);
  }

  // Every class must reach Thing. Walk down from the root instead of up from
  // each class.
  std::set<std::string> reached{std::string(kThing)};
  std::deque<std::string> queue{std::string(kThing)};
  while (!queue.empty()) {
    std::string node = std::move(queue.front());
    queue.pop_front();
    auto it = store.children_.find(node);
    if (it == store.children_.end()) continue;
    for (const auto& child : it->second) {
      if (reached.insert(child).second) queue.push_back(child);
    }
  }
  for (const auto& cls : store.classes_) {
    if (!reached.contains(cls)) {
      throw LoadError("class '" + cls + "' does not reach 'Thing'", class_use[cls]);
    }
  }

  return store;
}

void TaxonomyStore::index() {
  classes_.clear();
  parents_.clear();
  children_.clear();
  classes_.insert(std::string(kThing));
  for (const auto& [child, parent] : subclass_edges_) {
    classes_.insert(child);
    classes_.insert(parent);
    parents_[child].insert(parent);
    children_[parent].insert(child);
  }
  for (const auto& [entity, types] : entity_types_) {
    for (const auto& cls : types) {
      classes_.insert(cls);
      parents_[entity].insert(cls);
      children_[cls].insert(entity);
    }
  }
  class_lookup_ = {classes_.begin(), classes_.end()};
}

std::string TaxonomyStore::serialize() const {
  std::ostringstream out;
  out << "# source: " << source_name_ << '\n';
  for (const auto& entity : entity_as_class_) out << "EC\t" << entity << '\n';
  for (const auto& [child, parent] : subclass_edges_) {
    out << "SC\t" << child << '\t' << parent << '\n';
  }
  for (const auto& [entity, types] : entity_types_) {
    for (const auto& cls : types) out << "TY\t" << entity << '\t' << cls << '\n';
  }
  return out.str();
}

const std::set<std::string>& TaxonomyStore::classes_of(std::string_view entity) const {
  auto it = entity_types_.find(entity);
  return it == entity_types_.end() ? kEmptySet : it->second;
}

const std::set<std::string>& TaxonomyStore::parents(std::string_view label) const {
  auto it = parents_.find(label);
  return it == parents_.end() ? kEmptySet : it->second;
}

std::set<std::string> TaxonomyStore::ancestors(std::string_view cls) const {
  if (!has_class(cls)) throw GraphError("unknown class '" + std::string(cls) + "'");
  std::set<std::string> out;
  std::vector<std::string> stack(parents(cls).begin(), parents(cls).end());
  while (!stack.empty()) {
    std::string node = std::move(stack.back());
    stack.pop_back();
    if (!out.insert(node).second) continue;
    for (const auto& parent : parents(node)) stack.push_back(parent);
  }
  return out;
}

bool TaxonomyStore::is_ancestor_or_self(std::string_view ancestor, std::string_view node) const {
  if (ancestor == node) return true;
  std::set<std::string, std::less<>> seen;
  std::vector<std::string_view> stack{node};
  while (!stack.empty()) {
    std::string_view current = stack.back();
    stack.pop_back();
    for (const auto& parent : parents(current)) {
      if (parent == ancestor) return true;
      if (seen.insert(parent).second) stack.push_back(parent);
    }
  }
  return false;
}

bool TaxonomyStore::has_class(std::string_view label) const {
  return class_lookup_.contains(label);
}

bool TaxonomyStore::has_entity(std::string_view label) const {
  return entity_types_.contains(label);
}

bool TaxonomyStore::is_entity_as_class(std::string_view label) const {
  return entity_as_class_.contains(label);
}

SnapshotStats TaxonomyStore::compute_stats() const {
  SnapshotStats stats;
  stats.instance_count = entity_types_.size();
  stats.class_count = classes_.size();

  // Shortest distance from Thing to every class, following only edges whose
  // child is itself a class.
  std::map<std::string, std::size_t, std::less<>> class_depth{{std::string(kThing), 0}};
  std::deque<std::string> queue{std::string(kThing)};
  std::size_t parents_with_children = 0;
  std::size_t child_total = 0;
  while (!queue.empty()) {
    std::string node = std::move(queue.front());
    queue.pop_front();
    auto it = children_.find(node);
    if (it == children_.end()) continue;
    std::size_t depth = class_depth[node];
    for (const auto& child : it->second) {
      if (!has_class(child)) continue;
      if (class_depth.emplace(child, depth + 1).second) queue.push_back(child);
    }
  }
  for (const auto& cls : classes_) {
    auto it = children_.find(cls);
    if (it == children_.end()) continue;
    std::size_t n = std::count_if(it->second.begin(), it->second.end(),
                                  [this](const std::string& c) { return has_class(c); });
    if (n > 0) {
      ++parents_with_children;
      child_total += n;
    }
  }

  double depth_sum = 0.0;
  for (const auto& [entity, unused] : entity_types_) {
    std::size_t best = std::numeric_limits<std::size_t>::max();
    for (const auto& parent : parents(entity)) best = std::min(best, class_depth.at(parent));
    depth_sum += static_cast<double>(best);
  }
  if (!entity_types_.empty()) {
    stats.avg_tree_depth = depth_sum / static_cast<double>(entity_types_.size());
  }
  if (parents_with_children > 0) {
    stats.avg_branching_factor =
        static_cast<double>(child_total) / static_cast<double>(parents_with_children);
  }
  return stats;
}

bool TaxonomyStore::operator==(const TaxonomyStore& other) const {
  return subclass_edges_ == other.subclass_edges_ && entity_types_ == other.entity_types_ &&
         entity_as_class_ == other.entity_as_class_;
}

}  // namespace kged
