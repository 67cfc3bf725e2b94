// Copyright 2026 The Tabschema Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "fixture_oracle.h"
#include "tabschema/errors.h"
#include "tabschema/schema.h"

using namespace tabschema;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ConceptualSchema two_types() {
  ConceptualSchema s;
  s.hierarchy.dag.add_edge("Thing", "Movie", 3);
  s.hierarchy.dag.add_edge("Thing", "Company", 1);
  s.hierarchy.type_datasets = {{"Thing", {"m.csv", "c.csv"}}, {"Movie", {"m.csv"}},
                               {"Company", {"c.csv"}}};
  s.hierarchy.most_specific = {{"m.csv", {"Movie"}}, {"c.csv", {"Company"}}};
  return s;
}

ConceptualSchema random_schema(std::mt19937_64& rng) {
  ConceptualSchema s;
  const std::vector<std::string> names{"A", "B", "C", "D", "E"};
  for (const auto& n : names) {
    if (rng() % 2) s.hierarchy.dag.add_edge("Thing", n, static_cast<long>(rng() % 4));
  }
  s.hierarchy.dag.add_node("Thing");
  for (const auto& n : s.hierarchy.dag.nodes()) {
    std::string d = "t" + std::to_string(rng() % 3) + ".csv";
    s.hierarchy.type_datasets[n].insert(d);
    if (n != "Thing") s.hierarchy.most_specific[d].insert(n);
  }
  if (rng() % 2) {
    TypeAttributes atts;
    for (const auto& n : s.hierarchy.dag.nodes()) {
      ConceptualAttribute a;
      a.canonical_name = "name \"quoted\"";
      a.owner_type = n;
      a.inherited = rng() % 2;
      a.member_names = {"name", "title"};
      a.dataset_columns = {ColumnId{"t0.csv", rng() % 4}};
      atts[n].push_back(a);
    }
    s.attributes = atts;
    if (rng() % 2) s.relationships = std::vector<Relationship>{{"A", "name", "B", "relatesTo"}};
  }
  s.provenance = {{"tool", "test"}, {"seed", rng() % 100}};
  return s;
}

}  // namespace

TEST_SUITE("schema") {

TEST_CASE("round-trip over random schemas") {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 50; ++i) {
    ConceptualSchema s = random_schema(rng);
    std::string text = serialize_schema(s);
    ConceptualSchema back = parse_schema(text);
    CHECK(back == s);
    CHECK(serialize_schema(back) == text);
  }
}

TEST_CASE("stage-gated sections are absent") {
  auto j = schema_to_json(two_types());
  CHECK_FALSE(j.contains("attributes"));
  CHECK_FALSE(j.contains("relationships"));
  CHECK(j.contains("types"));
  CHECK(j.contains("edges"));
}

TEST_CASE("malformed schema files") {
  CHECK_THROWS_AS(parse_schema("{not json"), InputError);
  CHECK_THROWS_AS(parse_schema("{\"types\": 3}"), InputError);
  CHECK_THROWS_AS(load_schema("/nonexistent/schema.json"), InputError);
}

TEST_CASE("DOT for two types") {
  std::string dot = export_dot(two_types());
  CHECK(dot.rfind("digraph", 0) == 0);
  CHECK(dot.find("\"Movie\" [") != std::string::npos);
  CHECK(dot.find("\"Company\" [") != std::string::npos);
  CHECK(dot.find("\"Thing\" -> \"Movie\" [style=solid") != std::string::npos);
}

TEST_CASE("relationships are dashed labeled edges") {
  ConceptualSchema s = two_types();
  s.attributes = TypeAttributes{};
  s.relationships = std::vector<Relationship>{{"Movie", "studio", "Company", "producedBy"}};
  std::string dot = export_dot(s);
  CHECK(dot.find("\"Movie\" -> \"Company\" [style=dashed, constraint=false, label=\"producedBy\"") !=
        std::string::npos);
  CHECK(export_summary(s).find("Movie --producedBy--> Company") != std::string::npos);
}

TEST_CASE("golden DOT matches the golden schema") {
  auto dir = testing::fixture_dir() / "golden";
  ConceptualSchema s = load_schema(dir / "schema.json");
  CHECK(export_dot(s) == slurp(dir / "schema.dot"));
  CHECK(serialize_schema(s) == slurp(dir / "schema.json"));
}

}  // TEST_SUITE
