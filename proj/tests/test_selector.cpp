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

#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "kged/error.hpp"
#include "kged/pruning.hpp"
#include "kged/selector.hpp"
#include "support.hpp"

using namespace kged;
namespace kt = kged::testing;

namespace {

ChoiceQuery query(QueryKind kind, const std::vector<std::string>& labels,
                  DescriptionSource* descriptions = nullptr, bool multi = false) {
  QueryConfig config;
  config.multi_select = multi;
  return build_query(kind, "Justin", "Justin won at the MTV awards.", labels, descriptions, config);
}

QueryKind kind_from(const std::string& s) {
  if (s == "class") return QueryKind::kClassChoice;
  if (s == "entity") return QueryKind::kEntityChoice;
  if (s == "mixed") return QueryKind::kMixedChoice;
  return QueryKind::kAssessment;
}

std::string repeat_text(std::size_t n) {
  std::string out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(static_cast<char>('a' + i % 26));
  return out;
}

SelectionContext ctx(std::string id, std::size_t ordinal, std::optional<std::string> gold = {}) {
  return {std::move(id), ordinal, std::move(gold)};
}

}  // namespace

TEST_CASE("class query over four classes appends None") {
  ChoiceQuery q = query(QueryKind::kClassChoice, {"Organization", "Place", "Product", "FictionalEntity"});
  REQUIRE(q.options.size() == 5);
  CHECK(q.options.back().label == "None");
  CHECK(q.sentinel_index() == 5);
  for (std::size_t i = 0; i < q.options.size(); ++i) CHECK(q.options[i].index == i + 1);
  CHECK(q.template_version == "v1");
}

TEST_CASE("mixed query appends Other, entity queries have no sentinel") {
  CHECK(query(QueryKind::kMixedChoice, {"Musician"}).options.back().label == "Other");
  CHECK_FALSE(query(QueryKind::kEntityChoice, {"a", "b"}).sentinel.has_value());
}

TEST_CASE("entity descriptions are truncated to 250 characters") {
  std::string long_text = repeat_text(600);
  StaticDescriptions d(std::map<std::string, std::string>{{"a", long_text}, {"b", "short"}});
  ChoiceQuery q = query(QueryKind::kEntityChoice, {"a", "b", "c"}, &d);
  CHECK(q.options[0].description == long_text.substr(0, 250));
  CHECK(q.options[1].description == "short");
  CHECK_FALSE(q.options[2].description.has_value());
  CHECK(q.options[2].description_status == LookupStatus::kNotFound);
  std::string user = render_prompt(q).user;
  CHECK(user.find("3. c: no description available") != std::string::npos);
}

TEST_CASE("assessment query has one option and asks for yes or no") {
  ChoiceQuery q = query(QueryKind::kAssessment, {"Justin_Bieber"});
  CHECK(q.options.size() == 1);
  CHECK(render_prompt(q).user.find("Answer yes or no.") != std::string::npos);
  CHECK(render_prompt(q).user.find("Justin Bieber") != std::string::npos);
  std::vector<std::string> two{"a", "b"};
  CHECK_THROWS_AS(query(QueryKind::kAssessment, two), Error);
}

TEST_CASE("build_query rejects empty options and unknown templates") {
  std::vector<std::string> none;
  CHECK_THROWS_AS(query(QueryKind::kEntityChoice, none), Error);
  QueryConfig config;
  config.template_version = "v9";
  std::vector<std::string> one{"a"};
  CHECK_THROWS_AS(build_query(QueryKind::kEntityChoice, "m", "d", one, nullptr, config), ConfigError);
}

TEST_CASE("prompt rendering is a pure function of the query") {
  ChoiceQuery q = query(QueryKind::kClassChoice, {"Politician", "Musician"});
  PromptMessages a = render_prompt(q);
  PromptMessages b = render_prompt(q);
  CHECK(a.system == b.system);
  CHECK(a.user == b.user);
  CHECK(a.user.find("1. Politician\n2. Musician\n3. None\n") != std::string::npos);
  CHECK(a.user.find("Mention: \"Justin\"") != std::string::npos);
}

TEST_CASE("document excerpt is centred on the mention and valid UTF-8") {
  std::string doc(3000, 'x');
  doc.replace(2500, 6, "Justin");
  std::string cut = document_excerpt(doc, "Justin", std::nullopt, 100);
  CHECK(cut.size() == 100);
  CHECK(cut.find("Justin") != std::string::npos);
  CHECK(document_excerpt("short", "s", std::nullopt, 100) == "short");

  std::string wide;
  for (int i = 0; i < 400; ++i) wide += "é";
  wide += "Phoenix";
  for (int i = 0; i < 400; ++i) wide += "ü";
  std::string excerpt = document_excerpt(wide, "Phoenix", std::nullopt, 101);
  CHECK(excerpt.find("Phoenix") != std::string::npos);
  CHECK(excerpt.size() <= 101);
  CHECK(truncate_for_prompt(excerpt, 10000) == excerpt);
  CHECK((static_cast<unsigned char>(excerpt.front()) & 0xC0) != 0x80);
}

TEST_CASE("parse_response agrees with the hand-written fixture suite") {
  std::istringstream in(kt::read_text(kt::repo_dir() / "tests" / "data" / "parse_cases.jsonl"));
  std::string line;
  int cases = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto j = nlohmann::json::parse(line);
    ChoiceQuery q = query(kind_from(j["kind"]), j["options"].get<std::vector<std::string>>(),
                          nullptr, j["multi_select"].get<bool>());
    std::string raw = j["raw"];
    CAPTURE(raw);
    Selection s = parse_response(raw, q);
    CHECK(to_string(s.kind) == j["expect"]["kind"].get<std::string>());
    CHECK(s.indices == j["expect"]["indices"].get<std::vector<std::size_t>>());
    CHECK(s.index == s.indices.front());
    CHECK(to_string(s.parse_status) == j["expect"]["status"].get<std::string>());
    CHECK(s.raw_response == raw);
    ++cases;
  }
  CHECK(cases == 30);
}

TEST_CASE("parse_response never throws on arbitrary bytes") {
  ChoiceQuery q = query(QueryKind::kClassChoice, {"A", "B"});
  std::mt19937_64 rng(3);
  for (int i = 0; i < 2000; ++i) {
    std::string raw;
    for (std::size_t n = rng() % 40; n > 0; --n) raw.push_back(static_cast<char>(rng() % 256));
    Selection s;
    CHECK_NOTHROW(s = parse_response(raw, q));
    CHECK(s.index >= 1);
    CHECK(s.index <= 3);
  }
}

TEST_CASE("mock selector replays and fails fast") {
  MockSelector mock = MockSelector::load(kt::data_dir() / "scripts" / "fig1.jsonl");
  ChoiceQuery q = query(QueryKind::kClassChoice, {"Musician", "Politician"});
  CHECK(selected_label(mock.select(q, ctx("fig1-justin", 0)), q) == "Musician");
  CHECK(selected_label(mock.select(q, ctx("fig1-justin", 0)), q) == "Musician");
  try {
    mock.select(q, ctx("fig1-justin", 7));
    FAIL("expected SelectorError");
  } catch (const SelectorError& e) {
    CHECK(e.kind() == SelectorError::Kind::kScript);
    CHECK(std::string(e.what()).find("fig1-justin") != std::string::npos);
    CHECK(std::string(e.what()).find("7") != std::string::npos);
  }
}

TEST_CASE("mock script loading errors") {
  auto dir = std::filesystem::temp_directory_path() / "kged_selector_test";
  std::filesystem::create_directories(dir);
  auto write = [&](const std::string& body) {
    auto p = dir / "script.jsonl";
    std::ofstream(p) << body;
    return p;
  };
  CHECK_THROWS_AS(MockSelector::load(write("{\"mention_id\":\"a\",\"ordinal\":0}\n")), LoadError);
  CHECK_THROWS_AS(MockSelector::load(write(
                      "{\"mention_id\":\"a\",\"ordinal\":0,\"answer\":\"1\"}\n"
                      "{\"mention_id\":\"a\",\"ordinal\":0,\"answer\":\"2\"}\n")),
                  LoadError);
  CHECK_THROWS_AS(MockSelector::load(dir / "missing.jsonl"), ConfigError);
}

TEST_CASE("oracle selector steers toward gold") {
  TaxonomyStore store = load_snapshot(kt::data_dir() / "kg" / "fig1.tsv");
  OracleSelector oracle(store);
  ChoiceQuery cls = query(QueryKind::kClassChoice, {"Politician", "Musician"});
  CHECK(selected_label(oracle.select(cls, ctx("m", 0, "JustinBieber")), cls) == "Musician");
  ChoiceQuery mixed = query(QueryKind::kMixedChoice, {"Politician"});
  CHECK(selected_label(oracle.select(mixed, ctx("m", 0, "JustinBieber")), mixed) == "Other");
  ChoiceQuery ent = query(QueryKind::kEntityChoice, {"JustinTrudeau", "JustinBieber"});
  CHECK(oracle.select(ent, ctx("m", 0, "JustinBieber")).index == 2);
  CHECK(oracle.select(ent, ctx("m", 0, "Nobody")).index == 1);
  ChoiceQuery yes = query(QueryKind::kAssessment, {"JustinBieber"});
  CHECK(oracle.select(yes, ctx("m", 0, "JustinBieber")).kind == SelectionKind::kAccept);
  CHECK(oracle.select(yes, ctx("m", 0, "JustinTrudeau")).kind == SelectionKind::kReject);
}

TEST_CASE("recorded answers replay to an identical trace") {
  TaxonomyStore store = load_snapshot(kt::data_dir() / "kg" / "yago_sample.tsv");
  OracleSelector oracle(store);
  RecordingSelector recorder(oracle);
  StaticDescriptions descriptions;
  DisambiguationTask t;
  t.mention_id = "rec";
  t.mention = "Paris";
  t.document = "Paris at night.";
  t.candidates = {"Paris_Saint_Germain", "Paris", "Paris_Hilton", "Paris_Texas_film", "Jordan_River"};
  t.gold = "Paris_Hilton";
  std::string first = trace_to_json(disambiguate(t, store, recorder, descriptions).trace);

  auto path = std::filesystem::temp_directory_path() / "kged_recorded.jsonl";
  std::ofstream(path) << recorder.script_jsonl();
  MockSelector replay = MockSelector::load(path);
  Disambiguation again = disambiguate(t, store, replay, descriptions);
  CHECK(again.entity == "Paris_Hilton");
  CHECK(trace_to_json(again.trace) == first);
}
