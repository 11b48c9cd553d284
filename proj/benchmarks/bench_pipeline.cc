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

#include <benchmark/benchmark.h>

#include <algorithm>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "kged/descriptions.hpp"
#include "kged/pruning.hpp"
#include "kged/selector.hpp"
#include "kged/subgraph.hpp"
#include "kged/taxonomy.hpp"

namespace {

// Random layered taxonomy: `classes` classes, each with 1-2 parents from
// earlier layers, and `entities` entities typed under 1-2 classes.
kged::TaxonomyStore synthetic_store(int classes, int entities, unsigned seed) {
  std::mt19937 rng(seed);
  std::ostringstream text;
  for (int c = 0; c < classes; ++c) {
    std::string name = "C" + std::to_string(c);
    if (c < 4) {
      text << "SC\t" << name << "\tThing\n";
      continue;
    }
    std::uniform_int_distribution<int> pick(0, c - 1);
    int parents = 1 + static_cast<int>(rng() % 2);
    for (int p = 0; p < parents; ++p) text << "SC\t" << name << "\tC" << pick(rng) << '\n';
  }
  std::uniform_int_distribution<int> cls(0, classes - 1);
  for (int e = 0; e < entities; ++e) {
    int types = 1 + static_cast<int>(rng() % 2);
    for (int t = 0; t < types; ++t) text << "TY\tE" << e << "\tC" << cls(rng) << '\n';
  }
  std::istringstream in(text.str());
  return kged::TaxonomyStore::parse(in, "synthetic");
}

const kged::TaxonomyStore& store() {
  static const kged::TaxonomyStore s = synthetic_store(400, 2000, 7);
  return s;
}

std::vector<std::string> candidates(int k, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> pick(0, 1999);
  std::vector<std::string> out;
  while (static_cast<int>(out.size()) < k) {
    std::string e = "E" + std::to_string(pick(rng));
    if (std::find(out.begin(), out.end(), e) == out.end()) out.push_back(e);
  }
  return out;
}

void BM_BuildSubgraph(benchmark::State& state) {
  auto cands = candidates(static_cast<int>(state.range(0)), 11);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kged::build_subgraph(store(), cands));
  }
}
BENCHMARK(BM_BuildSubgraph)->Arg(2)->Arg(5)->Arg(10);

void BM_TransitiveReduce(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  kged::CandidateDag dag;
  for (int i = 0; i < n; ++i) dag.add_node("N" + std::to_string(i), kged::NodeKind::kClass);
  for (int i = 0; i < n; ++i) {
    dag.add_edge("Thing", "N" + std::to_string(i));
    for (int j = i + 1; j < n; ++j) dag.add_edge("N" + std::to_string(i), "N" + std::to_string(j));
  }
  for (auto _ : state) benchmark::DoNotOptimize(kged::transitive_reduce(dag));
}
BENCHMARK(BM_TransitiveReduce)->Arg(16)->Arg(64);

void BM_DisambiguateOracle(benchmark::State& state) {
  kged::OracleSelector oracle(store());
  kged::StaticDescriptions descriptions;
  kged::DisambiguationTask task;
  task.mention_id = "bench";
  task.mention = "mention";
  task.document = "A document that contains the mention once.";
  task.candidates = candidates(static_cast<int>(state.range(0)), 13);
  task.gold = task.candidates.back();
  for (auto _ : state) {
    benchmark::DoNotOptimize(kged::disambiguate(task, store(), oracle, descriptions));
  }
}
BENCHMARK(BM_DisambiguateOracle)->Arg(2)->Arg(5)->Arg(10);

}  // namespace

BENCHMARK_MAIN();
