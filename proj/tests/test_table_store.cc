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

#include <filesystem>
#include <fstream>
#include <set>

#include "tabschema/errors.h"
#include "tabschema/table_store.h"

using namespace tabschema;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("tabschema_ts_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

Dataset numbered(std::size_t rows) {
  std::string body = "id,label\n";
  for (std::size_t i = 0; i < rows; ++i) {
    body += std::to_string(i) + ",row" + std::to_string(i) + "\n";
  }
  return parse_table("n.csv", body, ',');
}

}  // namespace

TEST_SUITE("table_store") {

TEST_CASE("quoted fields, BOM and empty cells") {
  Dataset d = parse_table("t.csv", "\xEF\xBB\xBFname,note\n\"Smith, J\",\"said \"\"hi\"\"\"\nLee,\n",
                          ',');
  REQUIRE(d.columns.size() == 2);
  CHECK(d.columns[0].header == "name");
  CHECK(d.row_count == 2);
  CHECK(d.columns[0].values[0] == "Smith, J");
  CHECK(d.columns[1].values[0] == "said \"hi\"");
  CHECK_FALSE(d.columns[1].values[1].has_value());
}

TEST_CASE("ragged rows are null padded") {
  Dataset d = parse_table("r.csv", "a,b,c\n1\n1,2\n1,2,3\n", ',');
  REQUIRE(d.row_count == 3);
  for (const auto& c : d.columns) CHECK(c.values.size() == 3);
  // brute inspection of each row
  CHECK(d.row(0) == std::vector<Cell>{"1", std::nullopt, std::nullopt});
  CHECK(d.row(1) == std::vector<Cell>{"1", "2", std::nullopt});
  CHECK(d.row(2) == std::vector<Cell>{"1", "2", "3"});
}

TEST_CASE("rows wider than the header get generated headers") {
  Dataset d = parse_table("w.csv", "a\n1,2\n", ',');
  REQUIRE(d.columns.size() == 2);
  CHECK(d.columns[1].header == "column_1");
}

TEST_CASE("load_repository scans recursively and skips bad files") {
  fs::path root = scratch_dir("repo");
  fs::create_directories(root / "sub");
  std::ofstream(root / "b.csv") << "x,y\n1,2\n";
  std::ofstream(root / "sub" / "a.tsv") << "p\tq\nu\tv\n";
  std::ofstream(root / "empty.csv") << "";
  std::ofstream(root / "readme.txt") << "not a table";
  Repository repo = load_repository(root);
  REQUIRE(repo.datasets.size() == 2);
  CHECK(repo.datasets[0].id == "b.csv");
  CHECK(repo.datasets[1].id == "sub/a.tsv");
  CHECK(repo.datasets[1].columns[1].values[0] == "v");
  CHECK(repo.warnings.size() == 1);
}

TEST_CASE("missing directory is an input error") {
  CHECK_THROWS_AS(load_repository("/nonexistent/tabschema"), InputError);
}

TEST_CASE("head sampling") {
  Dataset d = numbered(10);
  RowSample s = sample_rows(d, 3, 1, SampleStrategy::kHead);
  REQUIRE(s.rows.size() == 3);
  CHECK(s.rows[2][0] == "2");
  CHECK(sample_rows(d, 50, 1).rows.size() == 10);
}

TEST_CASE("random sampling is deterministic per seed") {
  Dataset d = numbered(10);
  RowSample a = sample_rows(d, 5, 7, SampleStrategy::kRandom);
  RowSample b = sample_rows(d, 5, 7, SampleStrategy::kRandom);
  CHECK(a.rows == b.rows);
  std::set<std::string> ids;
  for (const auto& r : a.rows) ids.insert(*r[0]);
  CHECK(ids.size() == 5);
  RowSample c = sample_rows(d, 5, 8, SampleStrategy::kRandom);
  CHECK(c.rows.size() == 5);
}

TEST_CASE("column value sampling") {
  std::vector<Cell> values;
  for (int i = 0; i < 100; ++i) values.push_back("v" + std::to_string(i));
  auto a = sample_column_values(values, 5, true, 42);
  auto b = sample_column_values(values, 5, true, 42);
  CHECK(a.size() == 5);
  CHECK(a == b);
  CHECK(std::set<std::string>(a.begin(), a.end()).size() == 5);

  std::vector<Cell> dup{"x", "x", std::nullopt, "y", "x"};
  CHECK(sample_column_values(dup, 5, true, 1) == std::vector<std::string>{"x", "y"});
  CHECK(sample_column_values(dup, 5, false, 1).size() == 4);
  CHECK(sample_column_values(std::vector<Cell>{std::nullopt}, 5, true, 1).empty());
}

}  // TEST_SUITE
