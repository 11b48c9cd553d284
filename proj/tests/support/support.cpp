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

#include "support.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "json.hpp"

namespace kged::testing {

std::filesystem::path data_dir() { return std::filesystem::path(KGED_REPO_DIR) / "data"; }
std::filesystem::path repo_dir() { return KGED_REPO_DIR; }

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

TaxonomyStore parse_store(const std::string& text, const std::string& name) {
  std::istringstream in(text);
  return TaxonomyStore::parse(in, name);
}

Matrix reach(const Matrix& adj) {
  const std::size_t n = adj.size();
  Matrix r = adj;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!r[i][k]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (r[k][j]) r[i][j] = 1;
      }
    }
  }
  return r;
}

std::set<std::pair<int, int>> reduction_oracle(const Matrix& adj) {
  const int n = static_cast<int>(adj.size());
  Matrix r = reach(adj);
  std::set<std::pair<int, int>> out;
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      if (u == v || !r[u][v]) continue;
      bool via = false;
      for (int w = 0; w < n && !via; ++w) {
        if (w != u && w != v && r[u][w] && r[w][v]) via = true;
      }
      if (!via) out.emplace(u, v);
    }
  }
  return out;
}

std::vector<int> depth_oracle(const Matrix& adj, int root) {
  const int n = static_cast<int>(adj.size());
  std::vector<int> best(n, -1);
  std::function<void(int, int)> walk = [&](int v, int length) {
    best[v] = std::max(best[v], length);
    for (int w = 0; w < n; ++w) {
      if (adj[v][w] && w != v) walk(w, length + 1);
    }
  };
  walk(root, 0);
  return best;
}

std::vector<std::string> lca_oracle(const Graph& g, const std::vector<int>& targets) {
  Matrix r = reach(g.adj);
  std::vector<int> d = depth_oracle(g.adj, 0);
  int deepest = -1;
  std::vector<std::string> out;
  for (int a = 0; a < g.n; ++a) {
    if (d[a] < 0) continue;
    bool common = std::all_of(targets.begin(), targets.end(),
                              [&](int t) { return a == t || r[a][t]; });
    if (!common) continue;
    if (d[a] > deepest) {
      deepest = d[a];
      out.clear();
    }
    if (d[a] == deepest) out.push_back(g.label(a));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<std::set<std::string>> prune_oracle(const Graph& g, const std::set<int>& removed) {
  if (removed.contains(0)) return std::nullopt;
  Matrix adj = g.adj;
  for (int v : removed) {
    for (int w = 0; w < g.n; ++w) adj[v][w] = adj[w][v] = 0;
  }
  Matrix r = reach(adj);
  auto alive = [&](int v) { return !removed.contains(v) && (v == 0 || r[0][v]); };
  std::set<std::string> kept;
  bool any_entity = false;
  for (int v = 0; v < g.n; ++v) {
    if (!alive(v)) continue;
    bool reaches_entity = false;
    for (int e = 0; e < g.n && !reaches_entity; ++e) {
      if (g.entity[e] && alive(e) && (e == v || r[v][e])) reaches_entity = true;
    }
    if (reaches_entity) {
      kept.insert(g.label(v));
      any_entity = any_entity || g.entity[v];
    }
  }
  if (!any_entity) return std::nullopt;
  return kept;
}

CandidateDag to_dag(const Graph& g) {
  std::vector<std::string> order;
  for (int i = 1; i < g.n; ++i) {
    if (g.entity[i]) order.push_back(g.label(i));
  }
  CandidateDag dag(order);
  for (int i = 1; i < g.n; ++i) {
    dag.add_node(g.label(i), g.entity[i] ? NodeKind::kEntity : NodeKind::kClass);
  }
  for (int u = 0; u < g.n; ++u) {
    for (int v = 0; v < g.n; ++v) {
      if (g.adj[u][v]) dag.add_edge(g.label(u), g.label(v));
    }
  }
  return dag;
}

namespace {
int index_of(const std::string& label) { return label == "Thing" ? 0 : std::stoi(label.substr(1)); }
}  // namespace

std::set<std::pair<int, int>> edge_set(const CandidateDag& dag) {
  std::set<std::pair<int, int>> out;
  for (const auto& [p, c] : dag.edges()) out.emplace(index_of(p), index_of(c));
  return out;
}

namespace {
void mark_entities(Graph& g) {
  g.entity.assign(g.n, 0);
  for (int v = 1; v < g.n; ++v) {
    g.entity[v] = std::none_of(g.adj[v].begin(), g.adj[v].end(), [](char c) { return c != 0; });
  }
}
}  // namespace

Graph random_dag(std::mt19937_64& rng, int n, double p, bool rooted) {
  Graph g;
  g.n = n;
  g.adj.assign(n, std::vector<char>(n, 0));
  std::bernoulli_distribution edge(p);
  for (int j = 1; j < n; ++j) {
    bool has_parent = false;
    for (int i = 0; i < j; ++i) {
      if (edge(rng)) {
        g.adj[i][j] = 1;
        has_parent = true;
      }
    }
    if (rooted && !has_parent) {
      std::uniform_int_distribution<int> pick(0, j - 1);
      g.adj[pick(rng)][j] = 1;
    }
  }
  mark_entities(g);
  return g;
}

Graph graph_from_mask(int n, std::uint64_t mask) {
  Graph g;
  g.n = n;
  g.adj.assign(n, std::vector<char>(n, 0));
  int bit = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j, ++bit) {
      if (mask >> bit & 1U) g.adj[i][j] = 1;
    }
  }
  mark_entities(g);
  return g;
}

std::string random_store_text(std::mt19937_64& rng, int classes, int entities) {
  std::ostringstream out;
  std::bernoulli_distribution second(0.3);
  for (int c = 0; c < classes; ++c) {
    std::uniform_int_distribution<int> pick(-1, c - 1);
    int parent = pick(rng);
    out << "SC\tC" << c << '\t' << (parent < 0 ? std::string("Thing") : "C" + std::to_string(parent))
        << '\n';
    if (c > 1 && second(rng)) {
      int other = std::uniform_int_distribution<int>(0, c - 1)(rng);
      if (other != parent) out << "SC\tC" << c << "\tC" << other << '\n';
    }
  }
  std::uniform_int_distribution<int> cls(-1, classes - 1);
  for (int e = 0; e < entities; ++e) {
    int types = second(rng) ? 2 : 1;
    for (int t = 0; t < types; ++t) {
      int c = cls(rng);
      out << "TY\tE" << e << '\t' << (c < 0 ? std::string("Thing") : "C" + std::to_string(c)) << '\n';
    }
  }
  return out.str();
}

namespace {

struct StringGraph {
  std::map<std::string, std::set<std::string>> succ;
  std::map<std::string, std::string> kind;

  std::set<std::string> preds(const std::string& v) const {
    std::set<std::string> out;
    for (const auto& [u, s] : succ) {
      if (s.contains(v)) out.insert(u);
    }
    return out;
  }
  std::set<std::string> reachable(const std::string& from) const {
    std::set<std::string> seen;
    std::vector<std::string> stack{from};
    while (!stack.empty()) {
      std::string v = stack.back();
      stack.pop_back();
      auto it = succ.find(v);
      if (it == succ.end()) continue;
      for (const auto& w : it->second) {
        if (seen.insert(w).second) stack.push_back(w);
      }
    }
    return seen;
  }
  void remove(const std::string& v) {
    succ.erase(v);
    for (auto& [u, s] : succ) s.erase(v);
    kind.erase(v);
  }
  void reduce() {
    std::map<std::string, std::set<std::string>> r;
    for (const auto& [v, unused] : kind) r[v] = reachable(v);
    for (auto& [u, s] : succ) {
      s.erase(u);
      std::set<std::string> drop;
      for (const auto& v : s) {
        for (const auto& w : s) {
          if (w != v && r[w].contains(v)) drop.insert(v);
        }
      }
      for (const auto& v : drop) s.erase(v);
    }
  }
};

}  // namespace

std::set<std::tuple<std::string, std::string, std::string>> build_subgraph_oracle(
    const TaxonomyStore& store, const std::vector<std::string>& candidates) {
  if (!store.entity_as_class().empty()) {
    throw std::logic_error("oracle does not model entity-as-class records");
  }
  StringGraph g;
  g.kind["Thing"] = "class";
  // Step 1: typing edges and the ancestor closure.
  std::set<std::string> classes{"Thing"};
  for (const auto& c : candidates) {
    g.kind[c] = "entity";
    auto types = store.entity_types().find(c);
    if (types == store.entity_types().end()) {
      g.succ["Thing"].insert(c);
      continue;
    }
    for (const auto& cls : types->second) {
      g.succ[cls].insert(c);
      classes.insert(cls);
    }
  }
  for (bool grew = true; grew;) {
    grew = false;
    for (const auto& [child, parent] : store.subclass_edges()) {
      if (classes.contains(child) && classes.insert(parent).second) grew = true;
    }
  }
  for (const auto& cls : classes) g.kind[cls] = "class";
  for (const auto& [child, parent] : store.subclass_edges()) {
    if (classes.contains(child)) g.succ[parent].insert(child);
  }
  // Step 2: drop classes that reach no candidate.
  for (const auto& cls : classes) {
    if (cls == "Thing") continue;
    auto r = g.reachable(cls);
    bool useful = std::any_of(candidates.begin(), candidates.end(),
                              [&](const std::string& c) { return r.contains(c); });
    if (!useful) g.remove(cls);
  }
  // Step 3.
  g.reduce();
  // Step 4: collapse, smallest label first, until nothing qualifies.
  for (;;) {
    std::optional<std::string> victim;
    for (const auto& [v, k] : g.kind) {
      if (v == "Thing" || k != "class") continue;
      auto it = g.succ.find(v);
      if (it == g.succ.end() || it->second.size() != 1) continue;
      if (g.kind.at(*it->second.begin()) != "class") continue;
      victim = v;
      break;
    }
    if (!victim) break;
    std::string s = *g.succ[*victim].begin();
    std::set<std::string> preds = g.preds(*victim);
    g.remove(*victim);
    for (const auto& p : preds) g.succ[p].insert(s);
    g.reduce();
  }
  std::set<std::tuple<std::string, std::string, std::string>> out;
  for (const auto& [u, s] : g.succ) {
    for (const auto& v : s) out.emplace(u, v, g.kind.at(v));
  }
  return out;
}

std::set<std::tuple<std::string, std::string, std::string>> edge_triples(const CandidateDag& dag) {
  std::set<std::tuple<std::string, std::string, std::string>> out;
  for (const auto& [p, c] : dag.edges()) {
    out.emplace(p, c, dag.kind(c) == NodeKind::kEntity ? "entity" : "class");
  }
  return out;
}

Selection RandomSelector::select(const ChoiceQuery& query, const SelectionContext& context) {
  ++calls_;
  std::seed_seq seq{seed_, static_cast<std::uint64_t>(std::hash<std::string>{}(context.mention_id)),
                    static_cast<std::uint64_t>(context.ordinal)};
  std::mt19937_64 rng(seq);
  std::string raw;
  const std::size_t n = query.options.size();
  int roll = std::uniform_int_distribution<int>(0, 9)(rng);
  if (query.kind == QueryKind::kAssessment) {
    static const char* kVerdicts[] = {"yes", "no", "No.", "Yes, it does.", "maybe", ""};
    raw = kVerdicts[roll % 6];
  } else if (roll <= 5) {
    raw = std::to_string(std::uniform_int_distribution<std::size_t>(1, n)(rng));
  } else if (roll == 6) {
    raw = query.sentinel ? std::string(to_string(*query.sentinel)) : "1";
  } else if (roll == 7) {
    raw = "I am not sure which one fits.";
  } else if (roll == 8) {
    raw = std::to_string(n + 5);
  } else {
    raw = "1, " + std::to_string(n) + ", 2";
  }
  return parse_response(raw, query);
}

FetchResult CountingFetcher::fetch(const std::string& entity) {
  ++calls_;
  FetchResult r;
  if (fail_) {
    r.status = FetchResult::Status::kFailed;
    r.detail = "scripted failure";
    return r;
  }
  auto it = texts_.find(entity);
  if (it == texts_.end()) {
    r.status = FetchResult::Status::kNotFound;
    return r;
  }
  r.status = FetchResult::Status::kFound;
  r.text = it->second;
  return r;
}

HttpResponse ScriptedTransport::send(const HttpRequest& request) {
  std::lock_guard lock(mutex_);
  requests_.push_back(request);
  if (next_ >= responses_.size()) {
    HttpResponse r;
    r.failure = HttpResponse::Failure::kConnection;
    r.error = "script exhausted";
    return r;
  }
  return responses_[next_++];
}

std::vector<HttpRequest> ScriptedTransport::requests() const {
  std::lock_guard lock(mutex_);
  return requests_;
}

HttpResponse ok_json(const std::string& body) {
  HttpResponse r;
  r.status = 200;
  r.body = body;
  return r;
}

HttpResponse status_only(int status, const std::string& body) {
  HttpResponse r;
  r.status = status;
  r.body = body;
  return r;
}

HttpResponse timeout() {
  HttpResponse r;
  r.failure = HttpResponse::Failure::kTimeout;
  r.error = "timed out";
  return r;
}

std::string chat_envelope(const std::string& content) {
  nlohmann::json j;
  j["id"] = "chatcmpl-test";
  j["choices"] = nlohmann::json::array(
      {{{"index", 0}, {"message", {{"role", "assistant"}, {"content", content}}}}});
  return j.dump();
}

}  // namespace kged::testing
