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

#ifndef KGED_TAXONOMY_HPP_
#define KGED_TAXONOMY_HPP_

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace kged {

// Label of the root class every snapshot must contain.
inline constexpr std::string_view kThing = "Thing";

// Table-3 style summary of a snapshot.
struct SnapshotStats {
  std::size_t instance_count = 0;
  std::size_t class_count = 0;
  // Mean over entities of the shortest Thing-to-class distance, taken over
  // the entity's typing classes. An entity typed directly under Thing has
  // depth 0.
  double avg_tree_depth = 0.0;
  // Mean number of subclass children over classes with at least one.
  double avg_branching_factor = 0.0;
};

// Immutable class hierarchy plus entity typings.
//
// Classes and entities live in disjoint namespaces, except for entities
// declared with an `EC` record: those may additionally take part in the
// hierarchy as classes. Instances are safe to share across threads once
// loaded.
class TaxonomyStore {
 public:
  // Parses the TSV snapshot format (`SC`, `TY`, `EC` records, `#` comments)
  // and validates every store invariant. Throws LoadError.
  static TaxonomyStore load(const std::filesystem::path& path);
  static TaxonomyStore parse(std::istream& in, std::string source_name);

  // Canonical snapshot text: EC, then SC, then TY records, each sorted.
  // parse(serialize()) reproduces an equal store.
  std::string serialize() const;

  // Direct typing classes; empty for unknown entities.
  const std::set<std::string>& classes_of(std::string_view entity) const;

  // Strict ancestors of a class, `Thing` included. Throws GraphError for an
  // unknown class.
  std::set<std::string> ancestors(std::string_view cls) const;

  // Direct parents of a hierarchy node (a class, or an entity via its
  // typings). Empty for unknown labels.
  const std::set<std::string>& parents(std::string_view label) const;

  // True when `ancestor` equals `node` or is reachable upward from it.
  bool is_ancestor_or_self(std::string_view ancestor, std::string_view node) const;

  bool has_class(std::string_view label) const;
  bool has_entity(std::string_view label) const;
  bool is_entity_as_class(std::string_view label) const;

  // Present in the hierarchy at all, as entity or class.
  bool contains(std::string_view label) const {
    return has_class(label) || has_entity(label);
  }

  const std::set<std::string>& classes() const { return classes_; }
  const std::map<std::string, std::set<std::string>, std::less<>>& entity_types() const {
    return entity_types_;
  }
  const std::set<std::pair<std::string, std::string>>& subclass_edges() const {
    return subclass_edges_;
  }
  const std::set<std::string, std::less<>>& entity_as_class() const { return entity_as_class_; }
  const std::string& source_name() const { return source_name_; }

  SnapshotStats compute_stats() const;

  bool operator==(const TaxonomyStore& other) const;

 private:
  TaxonomyStore() = default;

  void index();

  std::string source_name_;
  std::set<std::pair<std::string, std::string>> subclass_edges_;  // (child, parent)
  std::map<std::string, std::set<std::string>, std::less<>> entity_types_;
  std::set<std::string, std::less<>> entity_as_class_;

  // Derived on load.
  std::set<std::string> classes_;
  std::set<std::string, std::less<>> class_lookup_;
  std::map<std::string, std::set<std::string>, std::less<>> parents_;
  std::map<std::string, std::set<std::string>, std::less<>> children_;
};

inline TaxonomyStore load_snapshot(const std::filesystem::path& path) {
  return TaxonomyStore::load(path);
}

inline SnapshotStats compute_stats(const TaxonomyStore& store) { return store.compute_stats(); }

}  // namespace kged

#endif  // KGED_TAXONOMY_HPP_
