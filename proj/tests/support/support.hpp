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

// Brute-force oracles, generators and test doubles shared by the test
// binaries. Nothing here calls the library's graph algorithms.

#ifndef KGED_TESTS_SUPPORT_HPP_
#define KGED_TESTS_SUPPORT_HPP_

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "kged/descriptions.hpp"
#include "kged/http_transport.hpp"
#include "kged/selector.hpp"
#include "kged/subgraph.hpp"
#include "kged/taxonomy.hpp"

namespace kged::testing {

std::filesystem::path data_dir();
std::filesystem::path repo_dir();
std::string read_text(const std::filesystem::path& path);
TaxonomyStore parse_store(const std::string& text, const std::string& name = "test");

using Matrix = std::vector<std::vector<char>>;

// Index graph; node 0 is the root "Thing", node i>0 is labelled "N<i>".
struct Graph {
  int n = 0;
  Matrix adj;
  std::vector<char> entity;

  std::string label(int i) const { return i == 0 ? "Thing" : "N" + std::to_string(i); }
};

// Reflexive-free transitive closure by Warshall.
Matrix reach(const Matrix& adj);
// Edge (u,v) survives iff v is reachable from u and no third node sits on a
// u-v path. Self-loops dropped.
std::set<std::pair<int, int>> reduction_oracle(const Matrix& adj);
// Longest root-to-node path by enumerating every path; -1 when unreachable.
std::vector<int> depth_oracle(const Matrix& adj, int root);
// Common ancestors-or-self of `targets`, keeping those of maximal depth.
std::vector<std::string> lca_oracle(const Graph& g, const std::vector<int>& targets);
// Labels surviving a prune of `removed`; nullopt when the prune must fail.
std::optional<std::set<std::string>> prune_oracle(const Graph& g, const std::set<int>& removed);

CandidateDag to_dag(const Graph& g);
std::set<std::pair<int, int>> edge_set(const CandidateDag& dag);

// Upper-triangular DAG on `n` nodes. With `rooted` every node gets at least
// one parent of smaller index, so everything hangs off node 0. Sinks are
// marked as entities.
Graph random_dag(std::mt19937_64& rng, int n, double p, bool rooted);
// Graph from an upper-triangular edge bitmask (bit order: (0,1),(0,2),...).
Graph graph_from_mask(int n, std::uint64_t mask);

// Snapshot text with `classes` classes C<i> and `entities` entities E<i>.
std::string random_store_text(std::mt19937_64& rng, int classes, int entities);

// Step-by-step construction from the raw store records, using reachability
// sets at every stage. Returns (parent, child, kind) triples.
std::set<std::tuple<std::string, std::string, std::string>> build_subgraph_oracle(
    const TaxonomyStore& store, const std::vector<std::string>& candidates);
std::set<std::tuple<std::string, std::string, std::string>> edge_triples(const CandidateDag& dag);

// Adversarial selector: answers are random indices, sentinels, multi-number
// lists, verdicts and garbage, seeded per (mention, ordinal).
class RandomSelector final : public Selector {
 public:
  explicit RandomSelector(std::uint64_t seed) : seed_(seed) {}
  Selection select(const ChoiceQuery& query, const SelectionContext& context) override;
  std::size_t calls() const { return calls_.load(); }

 private:
  std::uint64_t seed_;
  std::atomic<std::size_t> calls_{0};
};

// Counts fetches and serves a fixed map; entities outside it are not found.
class CountingFetcher final : public KbFetcher {
 public:
  explicit CountingFetcher(std::map<std::string, std::string> texts, bool fail = false)
      : texts_(std::move(texts)), fail_(fail) {}
  FetchResult fetch(const std::string& entity) override;
  std::string source_id() const override { return "counting"; }
  std::size_t calls() const { return calls_.load(); }

 private:
  std::map<std::string, std::string> texts_;
  bool fail_;
  std::atomic<std::size_t> calls_{0};
};

// Replays canned responses in order, recording every request.
class ScriptedTransport final : public HttpTransport {
 public:
  explicit ScriptedTransport(std::vector<HttpResponse> responses)
      : responses_(std::move(responses)) {}
  HttpResponse send(const HttpRequest& request) override;
  std::vector<HttpRequest> requests() const;

 private:
  mutable std::mutex mutex_;
  std::vector<HttpResponse> responses_;
  std::size_t next_ = 0;
  std::vector<HttpRequest> requests_;
};

HttpResponse ok_json(const std::string& body);
HttpResponse status_only(int status, const std::string& body = "");
HttpResponse timeout();
// Chat-completion envelope whose first choice says `content`.
std::string chat_envelope(const std::string& content);

}  // namespace kged::testing

#endif  // KGED_TESTS_SUPPORT_HPP_
