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

#include "oracles.h"
#include "tabschema/errors.h"
#include "tabschema/hierarchy.h"

using namespace tabschema;

namespace {

using Types = std::vector<std::string>;

TypePath path(Types types, std::string dataset = "d") {
  return TypePath{std::move(types), std::move(dataset)};
}

Types types_of(const TypePath& p) { return p.types; }

std::shared_ptr<Gateway> scripted(ScriptedProvider::Handler h) {
  GatewayOptions opts;
  opts.initial_backoff = std::chrono::milliseconds(1);
  return std::make_shared<Gateway>(std::make_shared<ScriptedProvider>(std::move(h)),
                                   std::make_shared<ResponseCache>(), opts);
}

// Judge answering "no" for the listed edges and "yes" otherwise.
std::shared_ptr<Gateway> judge_rejecting(std::set<Edge> rejected) {
  return scripted([rejected](const PromptRequest& r) -> std::optional<std::string> {
    if (r.template_id != TemplateId::kIsaCheck) return std::nullopt;
    Edge e{r.vars["parent"], r.vars["child"]};
    return rejected.count(e) ? "No" : "Yes";
  });
}

Dataset small_table(const std::string& id) {
  return parse_table(id, "title,year\nHeat,1995\nAlien,1979\n", ',');
}

}  // namespace

TEST_SUITE("hierarchy") {

TEST_CASE("single path completion") {
  auto paths = parse_type_paths("Thing → CreativeWork → Movie", 5);
  REQUIRE(paths.size() == 1);
  CHECK(paths[0].types == Types{"Thing", "CreativeWork", "Movie"});
  CHECK(paths[0].depth() == 2);
}

TEST_CASE("two-line completion shares a leaf") {
  auto paths = parse_type_paths("Thing → CreativeWork → VideoGame\nThing → Game → VideoGame", 5);
  REQUIRE(paths.size() == 2);
  CHECK(paths[0].leaf() == "VideoGame");
  CHECK(paths[1].leaf() == "VideoGame");
}

TEST_CASE("depth cap") {
  const char* deep = "Thing → A → B → C → D → E → F → G";
  CHECK_THROWS_AS(parse_type_paths(deep, 5), DepthError);
  CHECK(parse_type_paths("Thing → A → B → C → D → E", 5).size() == 1);
  CHECK_THROWS_AS(parse_type_paths("Thing → A → B → C → D → E → F", 5), DepthError);
}

TEST_CASE("trailing prose and repeats") {
  auto p = parse_type_paths("Thing -> Place -> City\nnote: confident", 5);
  REQUIRE(p.size() == 1);
  CHECK(p[0].types == Types{"Thing", "Place", "City"});
  CHECK_THROWS_AS(parse_type_paths("Thing → Thing → Place", 5), ParseError);
  CHECK(parse_type_paths("Thing → A\nThing → A\n", 5).size() == 1);
  CHECK_THROWS_AS(parse_type_paths("", 5), ParseError);
}

TEST_CASE("malformed completion fixture") {
  std::ifstream in(std::string(TABSCHEMA_TEST_DATA_DIR) + "/malformed_completions.json");
  REQUIRE(in.good());
  auto cases = nlohmann::json::parse(in);
  REQUIRE(cases.size() == 10);
  for (const auto& c : cases) {
    std::string raw = c["raw"];
    CAPTURE(c["name"].get<std::string>());
    if (c["expected"].is_string()) {
      CHECK_THROWS_AS(parse_type_paths(raw, 5), ParseError);
      continue;
    }
    std::vector<Types> got;
    for (const auto& p : parse_type_paths(raw, 5)) got.push_back(p.types);
    CHECK(got == c["expected"].get<std::vector<Types>>());
  }
}

TEST_CASE("re-prompt after an overlong completion") {
  auto gw = scripted([](const PromptRequest& r) -> std::optional<std::string> {
    if (r.attempt == 0) return "Thing → A → B → C → D → E → F → G";
    return "Thing → CreativeWork → Movie";
  });
  RunReport report;
  auto paths = infer_table_hierarchy(small_table("m.csv"), HierarchyOptions{}, *gw, report);
  REQUIRE(paths.size() == 1);
  CHECK(paths[0].source_dataset == "m.csv");
  CHECK(report.flags("reprompt").size() == 1);
  CHECK(report.skipped().empty());
}

TEST_CASE("exhausted retries skip the table") {
  auto gw = scripted([](const PromptRequest&) { return std::optional<std::string>("no idea"); });
  RunReport report;
  HierarchyOptions opts;
  opts.retry_budget = 3;
  CHECK(infer_table_hierarchy(small_table("x.csv"), opts, *gw, report).empty());
  REQUIRE(report.skipped().size() == 1);
  CHECK(report.skipped()[0].dataset == "x.csv");
  CHECK(report.flags("reprompt").size() == 4);
}

TEST_CASE("FET mode asks for specific types first") {
  std::vector<TemplateId> order;
  std::mutex mu;
  auto gw = scripted([&](const PromptRequest& r) -> std::optional<std::string> {
    std::lock_guard lock(mu);
    order.push_back(r.template_id);
    if (r.template_id == TemplateId::kHierarchyFetStage1) return "Movie";
    CHECK(r.vars["fet_types"] == nlohmann::json::array({"Movie"}));
    return "Thing → CreativeWork → Movie";
  });
  RunReport report;
  HierarchyOptions opts;
  opts.mode = PromptMode::kFet;
  auto paths = infer_table_hierarchy(small_table("m.csv"), opts, *gw, report);
  CHECK(paths.size() == 1);
  CHECK(order == std::vector<TemplateId>{TemplateId::kHierarchyFetStage1, TemplateId::kHierarchy});
}

TEST_CASE("merge counts paths per edge") {
  WeightedDag dag = merge_hierarchies({path({"Thing", "CreativeWork", "Movie"}),
                                       path({"Thing", "CreativeWork", "Book"})});
  CHECK(dag.weight("Thing", "CreativeWork") == 2);
  CHECK(dag.weight("CreativeWork", "Movie") == 1);

  WeightedDag disjoint = merge_hierarchies({path({"Thing", "A"}), path({"Thing", "B"})});
  CHECK(disjoint.nodes() == std::set<std::string>{"Thing", "A", "B"});
  CHECK(disjoint.edges().size() == 2);
  CHECK(disjoint.weight("Thing", "A") == 1);
}

TEST_CASE("merge weights match recount over 1000 random paths") {
  std::mt19937_64 rng(11);
  std::vector<TypePath> paths;
  while (paths.size() < 1000) {
    for (auto& p : oracle::random_type_paths(rng, 50)) paths.push_back(std::move(p));
  }
  paths.resize(1000);
  WeightedDag dag = merge_hierarchies(paths);
  for (const auto& [e, w] : dag.edges()) {
    CHECK(w == oracle::recount_edge(paths, e.first, e.second));
  }
}

TEST_CASE("inverse edge with lower weight is removed") {
  WeightedDag dag;
  dag.add_edge("Thing", "A", 1);
  dag.add_edge("A", "B", 1);
  dag.add_edge("B", "A", 3);
  RunReport report;
  WeightedDag out = prune(dag, nullptr, false, report);
  CHECK_FALSE(out.has_edge("A", "B"));
  CHECK(out.has_edge("B", "A"));
  CHECK(report.flags("inverse_removed").size() == 1);
}

TEST_CASE("equal-weight inverse pair") {
  WeightedDag dag;
  dag.add_edge("Company", "Organization", 2);
  dag.add_edge("Organization", "Company", 2);
  SUBCASE("judge rejects one direction") {
    auto gw = judge_rejecting({{"Company", "Organization"}});
    RunReport report;
    WeightedDag out = prune(dag, gw.get(), true, report);
    CHECK(out.has_edge("Organization", "Company"));
    CHECK_FALSE(out.has_edge("Company", "Organization"));
    CHECK(report.flags("tie_break").empty());
  }
  SUBCASE("both survive; larger source loses") {
    auto gw = judge_rejecting({});
    RunReport report;
    WeightedDag out = prune(dag, gw.get(), true, report);
    CHECK(out.has_edge("Company", "Organization"));
    CHECK_FALSE(out.has_edge("Organization", "Company"));
    CHECK(report.flags("tie_break").size() == 1);
  }
  SUBCASE("no judge") {
    RunReport report;
    WeightedDag out = prune(dag, nullptr, false, report);
    CHECK(out.edges().size() == 1);
    CHECK(out.has_edge("Company", "Organization"));
  }
}

TEST_CASE("judge removes a misplaced edge") {
  WeightedDag dag = merge_hierarchies({path({"Thing", "Event", "CreativeWork", "MusicAlbum"}),
                                       path({"Thing", "CreativeWork", "Movie"})});
  auto gw = judge_rejecting({{"Event", "CreativeWork"}});
  RunReport report;
  WeightedDag out = prune(dag, gw.get(), true, report);
  CHECK_FALSE(out.has_edge("Event", "CreativeWork"));
  CHECK(out.has_edge("CreativeWork", "MusicAlbum"));
  CHECK(report.flags("judge_removed").size() == 1);
}

TEST_CASE("unparseable judge keeps the edge") {
  WeightedDag dag;
  dag.add_edge("Thing", "A");
  auto gw = scripted([](const PromptRequest&) { return std::optional<std::string>("unclear"); });
  RunReport report;
  WeightedDag out = prune(dag, gw.get(), true, report);
  CHECK(out.has_edge("Thing", "A"));
  CHECK(report.flags("judge_unparseable").size() == 1);
}

TEST_CASE("planted self-loops are removed") {
  std::mt19937_64 rng(3);
  for (int round = 0; round < 20; ++round) {
    WeightedDag dag = merge_hierarchies(oracle::random_type_paths(rng, 20));
    for (const auto& n : std::set<std::string>(dag.nodes())) dag.add_edge(n, n, 2);
    RunReport report;
    WeightedDag out = prune(dag, nullptr, false, report);
    for (const auto& [e, _] : out.edges()) CHECK(e.first != e.second);
  }
}

TEST_CASE("3-cycle loses its lightest edge") {
  WeightedDag dag;
  dag.add_edge("Thing", "A", 1);
  dag.add_edge("A", "B", 5);
  dag.add_edge("B", "C", 4);
  dag.add_edge("C", "A", 1);
  RunReport report;
  auto h = repair_and_root(dag, {}, report);
  CHECK_FALSE(h.dag.has_edge("C", "A"));
  CHECK(h.dag.has_edge("A", "B"));
  CHECK(h.dag.has_edge("B", "C"));
  CHECK(report.flags("cycle_broken").size() == 1);
}

TEST_CASE("orphans are attached to Thing with weight 0") {
  WeightedDag dag;
  dag.add_edge("Thing", "A", 2);
  dag.add_edge("X", "Y", 1);
  RunReport report;
  auto h = repair_and_root(dag, {}, report);
  CHECK(h.dag.has_edge("Thing", "X"));
  CHECK(h.dag.weight("Thing", "X") == 0);
  CHECK_FALSE(h.dag.has_edge("Thing", "Y"));
  CHECK(oracle::hierarchy_violation(h.dag).empty());
}

TEST_CASE("edges into Thing are dropped") {
  WeightedDag dag;
  dag.add_edge("Thing", "A", 1);
  dag.add_edge("A", "Thing", 1);
  RunReport report;
  auto h = repair_and_root(dag, {}, report);
  CHECK(h.dag.edges().size() == 1);
  CHECK(h.dag.has_edge("Thing", "A"));
}

TEST_CASE("invariants over 500 random path multisets") {
  std::mt19937_64 rng(2026);
  int violations = 0;
  for (int round = 0; round < 500; ++round) {
    auto paths = oracle::random_type_paths(rng, 50);
    WeightedDag merged = merge_hierarchies(paths);
    for (const auto& [e, w] : merged.edges()) {
      if (w != oracle::recount_edge(paths, e.first, e.second)) ++violations;
    }
    RunReport report;
    auto h = repair_and_root(prune(merged, nullptr, false, report), paths, report);
    std::string v = oracle::hierarchy_violation(h.dag);
    if (!v.empty()) {
      ++violations;
      MESSAGE("round " << round << ": " << v);
    }
    for (const auto& p : paths) {
      if (!h.type_datasets["Thing"].count(p.source_dataset)) ++violations;
    }
  }
  CHECK(violations == 0);
}

TEST_CASE("dataset bookkeeping follows the final dag") {
  std::vector<TypePath> paths{path({"Thing", "CreativeWork", "VideoGame"}, "games"),
                              path({"Thing", "Game", "VideoGame"}, "games"),
                              path({"Thing", "CreativeWork", "Movie"}, "films")};
  RunReport report;
  auto h = repair_and_root(merge_hierarchies(paths), paths, report);
  CHECK(h.most_specific["games"] == std::set<std::string>{"VideoGame"});
  CHECK(h.type_datasets["Game"] == std::set<std::string>{"games"});
  CHECK(h.type_datasets["CreativeWork"] == std::set<std::string>{"films", "games"});
  CHECK(h.type_datasets["Thing"] == std::set<std::string>{"films", "games"});
}

TEST_CASE("top-level types") {
  RunReport r;
  auto single = repair_and_root(merge_hierarchies({path({"Thing", "A", "B"})}), {}, r);
  CHECK(top_level_types(single) == std::set<std::string>{"A"});
  auto two = repair_and_root(merge_hierarchies({path({"Thing", "A"}), path({"Thing", "B"})}), {}, r);
  CHECK(top_level_types(two) == std::set<std::string>{"A", "B"});

  // Six paths, enumerated by hand: Thing's children are CreativeWork, Event,
  // Organization and Place. Company and Country only ever sit deeper.
  std::vector<TypePath> six{path({"Thing", "CreativeWork", "Movie"}),
                            path({"Thing", "CreativeWork", "Book"}),
                            path({"Thing", "Place", "City"}),
                            path({"Thing", "Place", "Country"}),
                            path({"Thing", "Event", "CreativeWork"}),
                            path({"Thing", "Organization", "Company", "FilmStudio"})};
  auto h = repair_and_root(merge_hierarchies(six), six, r);
  CHECK(top_level_types(h) ==
        std::set<std::string>{"CreativeWork", "Event", "Organization", "Place"});
}

TEST_CASE("build_hierarchy end to end with a scripted model") {
  std::vector<Dataset> tables{small_table("a.csv"), small_table("b.csv"), small_table("c.csv")};
  auto gw = scripted([](const PromptRequest& r) -> std::optional<std::string> {
    if (r.template_id == TemplateId::kIsaCheck) return "yes";
    std::string id = r.vars["dataset_id"];
    if (id == "a.csv") return "Thing → Organization → Company";
    if (id == "b.csv") return "Thing → Company → Organization → University";
    return "Thing → Organization → Company → FilmStudio";
  });
  RunReport report;
  std::vector<TypePath> paths;
  auto h = build_hierarchy(tables, HierarchyOptions{}, *gw, report, &paths);
  CHECK(paths.size() == 3);
  CHECK(h.dag.has_edge("Organization", "Company"));
  CHECK_FALSE(h.dag.has_edge("Company", "Organization"));
  CHECK(oracle::hierarchy_violation(h.dag).empty());
}

}  // TEST_SUITE
