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

#include <random>

#include "doctest.h"
#include "kged/error.hpp"
#include "kged/pruning.hpp"
#include "kged/selector.hpp"
#include "kged/subgraph.hpp"
#include "kged/trace.hpp"
#include "support.hpp"

using namespace kged;
namespace kt = kged::testing;

namespace {

using Script = std::map<std::pair<std::string, std::size_t>, std::string>;

// Records every query it forwards.
class Capture final : public Selector {
 public:
  explicit Capture(Selector& inner) : inner_(inner) {}
  Selection select(const ChoiceQuery& q, const SelectionContext& c) override {
    queries.push_back(q);
    return inner_.select(q, c);
  }
  std::vector<ChoiceQuery> queries;

 private:
  Selector& inner_;
};

class Forbidden final : public Selector {
 public:
  Selection select(const ChoiceQuery&, const SelectionContext&) override {
    FAIL("selector must not be called");
    return {};
  }
};

DisambiguationTask task(std::vector<std::string> candidates, std::string id = "m") {
  DisambiguationTask t;
  t.mention_id = std::move(id);
  t.mention = "Justin";
  t.document = "Justin was the big winner at the MTV awards last night.";
  t.candidates = std::move(candidates);
  return t;
}

Script script(std::initializer_list<std::string> answers, const std::string& id = "m") {
  Script s;
  std::size_t i = 0;
  for (const auto& a : answers) s[{id, i++}] = a;
  return s;
}

// Thing -> Musician -> {JustinBieber, JustinTimberlake}; Ghost under Thing.
TaxonomyStore mixed_store() {
  return kt::parse_store(
      "SC\tMusician\tThing\nTY\tJustinBieber\tMusician\nTY\tJustinTimberlake\tMusician\n"
      "TY\tJustinMartyr\tThing\n");
}

TaxonomyStore fig1() { return load_snapshot(kt::data_dir() / "kg" / "fig1.tsv"); }

std::vector<std::string> kinds(const DisambiguationTrace& t) {
  std::vector<std::string> out;
  for (const auto& it : t.iterations) {
    for (const auto& q : it.queries) out.push_back(q.kind);
  }
  return out;
}

}  // namespace

TEST_CASE("two-step example: class query then entity query") {
  MockSelector mock = MockSelector::load(kt::data_dir() / "scripts" / "fig1.jsonl");
  StaticDescriptions descriptions;
  DisambiguationTask t = task({"JustinTrudeau", "JustinBieber", "JustinTimberlake"}, "fig1-justin");
  Disambiguation d = disambiguate(t, fig1(), mock, descriptions);
  CHECK(d.entity == "JustinBieber");
  REQUIRE(d.trace.iterations.size() == 2);
  const IterationRecord& first = d.trace.iterations[0];
  CHECK(first.lca == "Person");
  CHECK(first.case_kind == "all_classes");
  CHECK(first.options_shown == std::vector<std::string>{"Musician", "Politician", "None"});
  CHECK(first.pruned == std::vector<std::string>{"JustinTrudeau", "Politician"});
  CHECK(d.trace.iterations[1].lca == "Musician");
  CHECK(d.trace.iterations[1].case_kind == "all_entities");
  CHECK(d.trace.total_selector_calls == 2);
  CHECK(d.trace.result == "JustinBieber");
}

TEST_CASE("single candidate returns without a selector call") {
  Forbidden none;
  StaticDescriptions descriptions;
  Disambiguation d = disambiguate(task({"JustinBieber"}), fig1(), none, descriptions);
  CHECK(d.entity == "JustinBieber");
  CHECK(d.trace.iterations.empty());
  CHECK(d.trace.total_selector_calls == 0);
  Disambiguation b = baseline_disambiguate(task({"JustinBieber"}), none, nullptr, false);
  CHECK(b.entity == "JustinBieber");
}

TEST_CASE("None falls back to an entity query over all current leaves") {
  MockSelector mock(script({"None", "3"}));
  Capture capture(mock);
  StaticDescriptions descriptions(std::map<std::string, std::string>{{"JustinTimberlake", "American singer and actor."}});
  Disambiguation d = disambiguate(task({"JustinTrudeau", "JustinBieber", "JustinTimberlake"}),
                                  fig1(), capture, descriptions);
  CHECK(d.entity == "JustinTimberlake");
  CHECK(d.trace.iterations.size() == 1);
  CHECK(d.trace.iterations[0].sentinel_used == "None");
  CHECK(kinds(d.trace) == std::vector<std::string>{"class_choice", "entity_choice"});
  REQUIRE(capture.queries.size() == 2);
  const ChoiceQuery& entity = capture.queries[1];
  CHECK(entity.options.size() == 3);
  CHECK(entity.with_descriptions);
  CHECK(entity.options[2].description == "American singer and actor.");
  CHECK_FALSE(entity.options[0].description.has_value());
  CHECK(render_prompt(entity).user.find("no description available") != std::string::npos);
}

TEST_CASE("mixed case: Other keeps the entities, a class keeps its subtree") {
  StaticDescriptions descriptions;
  auto cands = std::vector<std::string>{"JustinMartyr", "JustinBieber", "JustinTimberlake"};
  SUBCASE("Other then accepted") {
    MockSelector mock(script({"Other", "yes"}));
    Disambiguation d = disambiguate(task(cands), mixed_store(), mock, descriptions);
    CHECK(d.entity == "JustinMartyr");
    CHECK(d.trace.iterations[0].case_kind == "mixed");
    CHECK(d.trace.iterations[0].sentinel_used == "Other");
    CHECK(d.trace.assessment_triggered);
    CHECK(kinds(d.trace) == std::vector<std::string>{"mixed_choice", "assessment"});
  }
  SUBCASE("Other then rejected reruns as an entity query over the iteration's start") {
    MockSelector mock(script({"Other", "no", "2"}));
    Capture capture(mock);
    Disambiguation d = disambiguate(task(cands), mixed_store(), capture, descriptions);
    CHECK(d.entity == "JustinBieber");
    CHECK(kinds(d.trace) ==
          std::vector<std::string>{"mixed_choice", "assessment", "entity_choice"});
    CHECK(capture.queries[2].options.size() == 3);
  }
  SUBCASE("a class choice drops the bare entities") {
    MockSelector mock(script({"Musician", "JustinTimberlake"}));
    Disambiguation d = disambiguate(task(cands), mixed_store(), mock, descriptions);
    CHECK(d.entity == "JustinTimberlake");
    CHECK(d.trace.iterations.size() == 2);
    CHECK(d.trace.iterations[0].leaves_after == 2);
  }
}

TEST_CASE("assessment accepts a lone survivor of a class query") {
  MockSelector mock(script({"Politician", "Yes."}));
  StaticDescriptions descriptions(std::map<std::string, std::string>{{"JustinTrudeau", "Canadian politician."}});
  Capture capture(mock);
  Disambiguation d =
      disambiguate(task({"JustinTrudeau", "JustinBieber"}), fig1(), capture, descriptions);
  CHECK(d.entity == "JustinTrudeau");
  CHECK(d.trace.iterations.size() == 1);
  CHECK(d.trace.assessment_queries == 1);
  REQUIRE(capture.queries.size() == 2);
  CHECK(capture.queries[1].kind == QueryKind::kAssessment);
  CHECK(capture.queries[1].options.size() == 1);
  CHECK(capture.queries[1].options[0].description == "Canadian politician.");
}

TEST_CASE("a selection that prunes nothing forces an entity query") {
  MockSelector mock(script({"1, 2", "2"}));
  StaticDescriptions descriptions;
  PruningOptions options;
  options.multi_select_classes = true;
  Disambiguation d = disambiguate(task({"JustinTrudeau", "JustinBieber", "JustinTimberlake"}),
                                  fig1(), mock, descriptions, options);
  CHECK(d.entity == "JustinBieber");
  REQUIRE(d.trace.iterations.size() == 1);
  CHECK(d.trace.iterations[0].forced_progress);
  CHECK(d.trace.entity_queries == 1);
}

TEST_CASE("selector failure propagates with the trace so far") {
  MockSelector mock(script({"Musician"}));
  StaticDescriptions descriptions;
  try {
    disambiguate(task({"JustinTrudeau", "JustinBieber", "JustinTimberlake"}), fig1(), mock,
                 descriptions);
    FAIL("expected a DisambiguationError");
  } catch (const DisambiguationError& e) {
    CHECK(e.kind() == SelectorError::Kind::kScript);
    CHECK(std::string(e.what()).find("ordinal 1") != std::string::npos);
    CHECK(e.trace().failed);
    CHECK(e.trace().total_selector_calls == 1);
    CHECK_FALSE(e.trace().iterations.empty());
  }
}

TEST_CASE("task validation") {
  CHECK_THROWS_AS(validate_task(task({}), 10), Error);
  CHECK_THROWS_AS(validate_task(task({"a", "a"}), 10), Error);
  CHECK_THROWS_AS(validate_task(task({"a", "b", "c"}), 2), Error);
  DisambiguationTask t = task({"a"});
  t.mention = "Nowhere";
  CHECK(validate_task(t, 10).size() == 1);
  t.mention = "justin";
  CHECK(validate_task(t, 10).empty());
}

TEST_CASE("baseline answers over the raw candidate list") {
  MockSelector mock(script({"3"}));
  Capture capture(mock);
  Disambiguation d = baseline_disambiguate(
      task({"JustinTrudeau", "JustinBieber", "JustinTimberlake"}), capture, nullptr, false);
  CHECK(d.entity == "JustinTimberlake");
  CHECK(d.trace.pipeline == "baseline");
  CHECK_FALSE(capture.queries[0].with_descriptions);
}

TEST_CASE("context-biased baseline picks the team on the Phoenix sentence") {
  TaxonomyStore store = load_snapshot(kt::data_dir() / "kg" / "yago_sample.tsv");
  DisambiguationTask t;
  t.mention_id = "phx-01";
  t.mention = "Phoenix";
  t.document = "A six-game series begins this Friday in Phoenix and the team hopes to get O'Neal back.";
  t.candidates = {"Phoenix_Suns", "Phoenix_Arizona", "Phoenix_Mars_Lander", "Phoenix_Marvel_Comics"};
  MockSelector biased = MockSelector::load(kt::data_dir() / "scripts" / "phoenix_baseline.jsonl");
  CHECK(baseline_disambiguate(t, biased, nullptr, false).entity == "Phoenix_Suns");
  MockSelector guided = MockSelector::load(kt::data_dir() / "scripts" / "phoenix_kg.jsonl");
  StaticDescriptions descriptions;
  Disambiguation d = disambiguate(t, store, guided, descriptions);
  CHECK(d.entity == "Phoenix_Arizona");
  CHECK(d.trace.iterations[0].options_shown ==
        std::vector<std::string>{"BasketballTeam", "City", "ComicCharacter", "Spacecraft", "None"});
}

TEST_CASE("oracle selector always recovers the gold entity") {
  std::mt19937_64 rng(77);
  StaticDescriptions descriptions;
  int wrong = 0;
  for (int i = 0; i < 1000; ++i) {
    TaxonomyStore store = kt::parse_store(kt::random_store_text(rng, 1 + rng() % 30, 12));
    OracleSelector oracle(store);
    std::vector<std::string> pool;
    for (int e = 0; e < 12; ++e) pool.push_back("E" + std::to_string(e));
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(1 + rng() % 10);
    DisambiguationTask t = task(pool, "r" + std::to_string(i));
    t.gold = pool[rng() % pool.size()];
    if (disambiguate(t, store, oracle, descriptions).entity != *t.gold) ++wrong;
  }
  CHECK(wrong == 0);

  TaxonomyStore yago = load_snapshot(kt::data_dir() / "kg" / "yago_sample.tsv");
  OracleSelector oracle(yago);
  std::vector<std::string> entities;
  for (const auto& [e, unused] : yago.entity_types()) entities.push_back(e);
  for (int i = 0; i < 300; ++i) {
    std::shuffle(entities.begin(), entities.end(), rng);
    std::vector<std::string> cands(entities.begin(), entities.begin() + 2 + rng() % 9);
    DisambiguationTask t = task(cands, "y" + std::to_string(i));
    t.gold = cands[rng() % cands.size()];
    if (disambiguate(t, yago, oracle, descriptions).entity != *t.gold) ++wrong;
  }
  CHECK(wrong == 0);
}

TEST_CASE("random selector runs stay within the prompt bounds") {
  std::mt19937_64 rng(5);
  StaticDescriptions descriptions;
  for (int i = 0; i < 500; ++i) {
    TaxonomyStore store = kt::parse_store(kt::random_store_text(rng, 1 + rng() % 30, 12));
    kt::RandomSelector random(static_cast<std::uint64_t>(i));
    std::vector<std::string> pool;
    for (int e = 0; e < 12; ++e) pool.push_back("E" + std::to_string(e));
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(1 + rng() % 10);
    PruningOptions options;
    options.multi_select_classes = i % 2 == 1;
    Disambiguation d = disambiguate(task(pool, "b" + std::to_string(i)), store, random,
                                    descriptions, options);
    const std::size_t k = pool.size();
    CHECK(std::find(pool.begin(), pool.end(), d.entity) != pool.end());
    CHECK(d.trace.iterations.size() <= k);
    CHECK(d.trace.entity_queries <= k);
    CHECK(d.trace.total_selector_calls <= 3 * k);
    std::size_t counted = 0;
    for (const auto& it : d.trace.iterations) counted += it.queries.size();
    CHECK(counted == d.trace.total_selector_calls);
    CHECK(d.trace.total_selector_calls ==
          d.trace.class_queries + d.trace.entity_queries + d.trace.assessment_queries);
  }
}

TEST_CASE("traces are deterministic and round-trip through JSON") {
  TaxonomyStore store = load_snapshot(kt::data_dir() / "kg" / "yago_sample.tsv");
  OracleSelector oracle(store);
  StaticDescriptions descriptions;
  DisambiguationTask t = task({"Phoenix_Suns", "Phoenix_Arizona", "Phoenix_band", "Paris"});
  t.gold = "Phoenix_band";
  std::string a = trace_to_json(disambiguate(t, store, oracle, descriptions).trace);
  std::string b = trace_to_json(disambiguate(t, store, oracle, descriptions).trace);
  CHECK(a == b);
  CHECK(trace_to_json(trace_from_json(a)) == a);
  CHECK_THROWS_AS(trace_from_json("{not json"), LoadError);
  CHECK_THROWS_AS(trace_from_json("[1, 2]"), LoadError);
}
