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

#include <random>

#include "fixture_oracle.h"
#include "oracles.h"
#include "tabschema/attributes.h"
#include "tabschema/errors.h"

using namespace tabschema;

namespace {

using Names = std::set<std::string>;

std::shared_ptr<Gateway> scripted(ScriptedProvider::Handler h) {
  return std::make_shared<Gateway>(std::make_shared<ScriptedProvider>(std::move(h)),
                                   std::make_shared<ResponseCache>());
}

// Resolution answered from a fixed synonym table; names outside it stay alone.
std::shared_ptr<Gateway> synonym_model(std::map<std::string, std::string> canonical_of) {
  return scripted([canonical_of](const PromptRequest& r) -> std::optional<std::string> {
    if (r.template_id != TemplateId::kAttrResolution) return std::nullopt;
    std::map<std::string, std::vector<std::string>> groups;
    for (const auto& n : r.vars["names"].get<std::vector<std::string>>()) {
      auto it = canonical_of.find(n);
      groups[it == canonical_of.end() ? n : it->second].push_back(n);
    }
    std::string out;
    for (const auto& [c, ms] : groups) {
      out += c + ":";
      for (const auto& m : ms) out += " " + m + ",";
      out += "\n";
    }
    return out;
  });
}

ConceptualAttribute attr(std::string name, std::string owner, std::string dataset = "d",
                         std::size_t index = 0) {
  ConceptualAttribute a;
  a.canonical_name = name;
  a.member_names = {name};
  a.owner_type = std::move(owner);
  a.dataset_columns = {ColumnId{std::move(dataset), index}};
  return a;
}

// Ten children; the first `with_name` of them carry a "name" attribute.
std::map<std::string, std::vector<ConceptualAttribute>> children_with(int with_name) {
  std::map<std::string, std::vector<ConceptualAttribute>> kids;
  for (int i = 0; i < 10; ++i) {
    std::string child = "Child" + std::to_string(i);
    kids[child].push_back(attr("id_" + std::to_string(i), child, child));
    if (i < with_name) kids[child].push_back(attr("name", child, child, 1));
  }
  return kids;
}

bool promoted(const std::vector<ConceptualAttribute>& atts, const std::string& name) {
  return std::any_of(atts.begin(), atts.end(),
                     [&](const auto& a) { return a.canonical_name == name && a.inherited; });
}

}  // namespace

TEST_SUITE("attributes") {

TEST_CASE("attribute names are snake_cased") {
  Dataset d = parse_table("m.csv", "Release Year\n1995\n1979\n", ',');
  auto gw = scripted([](const PromptRequest&) {
    return std::optional<std::string>("Attribute name: `Release Year`");
  });
  RunReport report;
  CHECK(infer_attribute_name(d.columns[0], d, "Movie", {}, *gw, report) == "release_year");
}

TEST_CASE("empty answers fall back to the header") {
  Dataset d = parse_table("m.csv", "Directed By\nAng Lee\n", ',');
  auto gw = scripted([](const PromptRequest&) { return std::optional<std::string>("  \n"); });
  RunReport report;
  CHECK(infer_attribute_name(d.columns[0], d, "Movie", {}, *gw, report) == "directed_by");
  CHECK(report.flags("name_fallback").size() == 1);
}

TEST_CASE("replayed names for ten fixture columns") {
  RunConfig config = testing::fixture_config();
  auto gw = make_gateway(config);
  Repository repo = load_repository(config.input_dir);
  std::map<std::string, const Dataset*> by_id;
  for (const auto& d : repo.datasets) by_id[d.id] = &d;
  const std::vector<std::tuple<std::string, std::size_t, std::string, std::string>> cases{
      {"movies_1.csv", 0, "Movie", "title"},
      {"movies_1.csv", 1, "Movie", "director"},
      {"movies_1.csv", 2, "Movie", "release_year"},
      {"movies_1.csv", 3, "Movie", "studio"},
      {"movies_2.csv", 0, "Movie", "film_title"},
      {"movies_2.csv", 1, "Movie", "directed_by"},
      {"movies_2.csv", 2, "Movie", "year"},
      {"movies_2.csv", 3, "Movie", "production_company"},
      {"books.csv", 3, "Book", "page_count"},
      {"universities.csv", 0, "CollegeOrUniversity", "university_name"},
  };
  AttributeOptions opts;
  for (const auto& [dataset, index, type, expected] : cases) {
    RunReport report;
    const Dataset& d = *by_id.at(dataset);
    CHECK(infer_attribute_name(d.columns[index], d, type, opts, *gw, report) == expected);
  }
}

TEST_CASE("resolution parsing") {
  Names names{"title", "film_title", "director", "directed_by", "year"};
  auto groups = parse_resolution(
      "Groups:\ntitle: title, Film Title\n- director: director, directed_by\nyear: year\n", names);
  REQUIRE(groups.size() == 3);
  CHECK(groups[1].canonical_name == "title");
  CHECK(groups[1].members == Names{"title", "film_title"});
  CHECK(groups[0].members == Names{"directed_by", "director"});
  CHECK_THROWS_AS(parse_resolution("no structure here", names), ParseError);
}

TEST_CASE("partition repair") {
  Names names{"a", "b", "c", "d"};
  std::vector<AttributeGroup> raw{{"x", {"a", "b", "ghost"}}, {"y", {"b", "c"}}, {"z", {"ghost"}}};
  auto fixed = repair_partition(raw, names);
  CHECK(oracle::partition_violation(fixed, names).empty());
  CHECK(fixed == std::vector<AttributeGroup>{{"d", {"d"}}, {"x", {"a", "b"}}, {"y", {"c"}}});

  std::vector<AttributeGroup> repeated{{"name", {"a"}}, {"name", {"b"}}};
  auto merged = repair_partition(repeated, Names{"a", "b"});
  REQUIRE(merged.size() == 1);
  CHECK(merged[0].members == Names{"a", "b"});
}

TEST_CASE("single name needs no call; garbage gives identity") {
  auto gw = scripted([](const PromptRequest&) { return std::optional<std::string>("???"); });
  RunReport report;
  CHECK(resolve_attribute_names({"only"}, {}, *gw, report).size() == 1);
  CHECK(gw->stats().requests == 0);
  auto groups = resolve_attribute_names({"a", "b"}, {}, *gw, report);
  CHECK(groups.size() == 2);
  CHECK(report.flags("resolution_identity").size() == 1);
}

TEST_CASE("adversarial completions always partition the input") {
  std::mt19937_64 rng(99);
  int violations = 0;
  for (int round = 0; round < 100; ++round) {
    auto gw = scripted([&rng](const PromptRequest& r) -> std::optional<std::string> {
      auto names = r.vars["names"].get<std::vector<std::string>>();
      std::uniform_int_distribution<int> pick(0, 9);
      std::string out;
      int lines = pick(rng) % 5 + 1;
      for (int l = 0; l < lines; ++l) {
        out += "g" + std::to_string(pick(rng) % 3) + ":";
        for (int m = 0; m < 4; ++m) {
          int roll = pick(rng);
          if (roll < 6) out += " " + names[rng() % names.size()] + ",";  // duplicates likely
          else if (roll < 8) out += " invented_" + std::to_string(roll) + ",";
          else out += " ,";
        }
        out += "\n";
      }
      return out;
    });
    Names names;
    int n = static_cast<int>(rng() % 12) + 2;
    for (int i = 0; i < n; ++i) names.insert("n" + std::to_string(i));
    RunReport report;
    AttributeOptions opts;
    opts.resolution_batch_size = 5;
    auto groups = resolve_attribute_names(names, opts, *gw, report);
    if (!oracle::partition_violation(groups, names).empty()) ++violations;
  }
  CHECK(violations == 0);
}

TEST_CASE("batched resolution merges across batches") {
  Names names;
  std::map<std::string, std::string> syn;
  for (int i = 0; i < 130; ++i) {
    std::string n = "attr_" + std::to_string(1000 + i);
    names.insert(n);
    syn[n] = "group_" + std::to_string(i % 3);
  }
  syn["group_0"] = "group_0";
  syn["group_1"] = "group_0";
  auto gw = synonym_model(syn);
  RunReport report;
  auto groups = resolve_attribute_names(names, AttributeOptions{}, *gw, report);
  CHECK(oracle::partition_violation(groups, names).empty());
  REQUIRE(groups.size() == 2);
  CHECK(groups[0].canonical_name == "group_0");
  CHECK(groups[0].members.size() == 87);
}

TEST_CASE("theta boundary") {
  auto gw = synonym_model({});
  RunReport report;
  AttributeOptions opts;
  opts.theta = 0.9;
  CHECK(promoted(promote_inherited("Parent", children_with(9), opts, *gw, report), "name"));
  CHECK_FALSE(promoted(promote_inherited("Parent", children_with(8), opts, *gw, report), "name"));
  opts.theta = 1.0;
  CHECK(promoted(promote_inherited("Parent", children_with(10), opts, *gw, report), "name"));
  CHECK_FALSE(promoted(promote_inherited("Parent", children_with(9), opts, *gw, report), "name"));
}

TEST_CASE("promotion is monotone in theta") {
  auto gw = synonym_model({});
  std::mt19937_64 rng(5);
  for (int round = 0; round < 30; ++round) {
    std::map<std::string, std::vector<ConceptualAttribute>> kids;
    for (int c = 0; c < 6; ++c) {
      std::string child = "C" + std::to_string(c);
      kids[child];
      for (int a = 0; a < 5; ++a) {
        if (rng() % 2) kids[child].push_back(attr("a" + std::to_string(a), child, child, a));
      }
    }
    std::set<std::string> previous;
    bool first = true;
    for (double theta : {0.2, 0.4, 0.6, 0.8, 1.0}) {
      AttributeOptions opts;
      opts.theta = theta;
      RunReport report;
      std::set<std::string> now;
      for (const auto& a : promote_inherited("P", kids, opts, *gw, report)) {
        now.insert(a.canonical_name);
      }
      if (!first) {
        CHECK(std::includes(previous.begin(), previous.end(), now.begin(), now.end()));
      }
      previous = now;
      first = false;
    }
  }
}

TEST_CASE("promoted attribute pools columns of synonyms") {
  auto gw = synonym_model({{"film_title", "title"}});
  std::map<std::string, std::vector<ConceptualAttribute>> kids{
      {"Movie", {attr("film_title", "Movie", "m.csv", 0)}},
      {"Book", {attr("title", "Book", "b.csv", 2)}}};
  RunReport report;
  auto out = promote_inherited("CreativeWork", kids, AttributeOptions{}, *gw, report);
  REQUIRE(out.size() == 1);
  CHECK(out[0].canonical_name == "title");
  CHECK(out[0].owner_type == "CreativeWork");
  CHECK(out[0].dataset_columns ==
        std::set<ColumnId>{ColumnId{"b.csv", 2}, ColumnId{"m.csv", 0}});
}

TEST_CASE("two-level hierarchy end to end") {
  std::vector<Dataset> tables{
      parse_table("m.csv", "film title,director\nHeat,Michael Mann\n", ','),
      parse_table("b.csv", "title,author\nBeloved,Toni Morrison\n", ',')};
  GlobalHierarchy h;
  h.dag.add_edge("Thing", "CreativeWork", 2);
  h.dag.add_edge("CreativeWork", "Movie", 1);
  h.dag.add_edge("CreativeWork", "Book", 1);
  h.most_specific = {{"m.csv", {"Movie"}}, {"b.csv", {"Book"}}};

  auto gw = scripted([](const PromptRequest& r) -> std::optional<std::string> {
    if (r.template_id == TemplateId::kAttrName) return r.vars["header"].get<std::string>();
    if (r.template_id == TemplateId::kAttrResolution) {
      std::string out;
      for (const auto& n : r.vars["names"]) {
        std::string s = n;
        out += (s == "film_title" ? "title" : s) + ": " + s + "\n";
      }
      return out;
    }
    return std::nullopt;
  });
  RunReport report;
  auto result = infer_attributes(h, tables, AttributeOptions{}, *gw, report);

  // Hand-derived: Movie{director, title<-film_title}, Book{author, title},
  // CreativeWork{^title over both columns}, Thing untouched.
  REQUIRE(result.attributes.size() == 3);
  const auto& movie = result.attributes.at("Movie");
  REQUIRE(movie.size() == 2);
  CHECK(movie[0].canonical_name == "director");
  CHECK(movie[1].canonical_name == "title");
  CHECK(movie[1].member_names == Names{"film_title"});
  const auto& cw = result.attributes.at("CreativeWork");
  REQUIRE(cw.size() == 1);
  CHECK(cw[0].inherited);
  CHECK(cw[0].dataset_columns ==
        std::set<ColumnId>{ColumnId{"b.csv", 0}, ColumnId{"m.csv", 0}});
  CHECK_FALSE(result.attributes.count("Thing"));
  CHECK(result.traversal == std::vector<std::string>{"Book", "Movie", "CreativeWork", "Thing"});
}

}  // TEST_SUITE
