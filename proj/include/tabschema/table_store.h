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

#ifndef TABSCHEMA_TABLE_STORE_H_
#define TABSCHEMA_TABLE_STORE_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tabschema {

// A cell is text or null. Cells are trimmed at load; empty means null.
using Cell = std::optional<std::string>;

struct ColumnId {
  std::string dataset;
  std::size_t index = 0;

  auto operator<=>(const ColumnId&) const = default;
  std::string to_string() const;
};

struct Column {
  ColumnId id;
  std::string header;
  std::vector<Cell> values;
};

// A loaded table. Rectangular: every column holds row_count cells.
struct Dataset {
  std::string id;  // path relative to the repository root
  std::string name;
  std::vector<Column> columns;
  std::size_t row_count = 0;

  std::vector<std::string> headers() const;
  std::vector<Cell> row(std::size_t i) const;
};

struct Repository {
  std::vector<Dataset> datasets;  // sorted by id
  std::vector<std::string> warnings;
};

enum class SampleStrategy { kHead, kRandom };

struct RowSample {
  std::string dataset_id;
  std::vector<std::string> headers;
  std::vector<std::vector<Cell>> rows;
};

// Loads every .csv / .tsv file under `root` (recursively). Throws InputError
// if `root` is not a readable directory; malformed files are skipped with a
// warning.
Repository load_repository(const std::filesystem::path& root);

// Parses one delimited file body. Throws InputError on malformed input
// (unterminated quotes, missing header row).
Dataset parse_table(std::string id, std::string_view body, char delimiter);

RowSample sample_rows(const Dataset& dataset, std::size_t n, std::uint64_t seed,
                      SampleStrategy strategy = SampleStrategy::kHead);

// Draws up to k non-null values. With `unique`, duplicates are removed first.
// When at most k candidates exist they are returned in table order.
std::vector<std::string> sample_column_values(std::span<const Cell> values,
                                              std::size_t k, bool unique,
                                              std::uint64_t seed);
std::vector<std::string> sample_column_values(const Column& column, std::size_t k,
                                              bool unique, std::uint64_t seed);

// Seed for one item, derived from the run seed and a stable item key.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view key);

}  // namespace tabschema

#endif  // TABSCHEMA_TABLE_STORE_H_
