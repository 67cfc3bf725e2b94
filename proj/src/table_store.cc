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

#include "tabschema/table_store.h"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <system_error>

#include "tabschema/errors.h"
#include "tabschema/text.h"

namespace tabschema {
namespace fs = std::filesystem;
namespace {

// RFC 4180 style records: quoted fields may contain delimiters, doubled
// quotes and newlines.
std::vector<std::vector<std::string>> parse_records(std::string_view body,
                                                    char delimiter) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  std::size_t i = 0;
  if (body.substr(0, 3) == "\xEF\xBB\xBF") i = 3;

  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    bool blank = record.size() == 1 && text::trim(record[0]).empty();
    if (!blank) records.push_back(std::move(record));
    record.clear();
  };

  for (; i < body.size(); ++i) {
    char c = body[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < body.size() && body[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && !field_started) {
      in_quotes = true;
      field_started = true;
    } else if (c == delimiter) {
      end_field();
    } else if (c == '\n') {
      end_record();
    } else if (c == '\r') {
      // CRLF: the '\n' ends the record.
    } else {
      field.push_back(c);
      if (!text::trim(std::string_view(&c, 1)).empty()) field_started = true;
    }
  }
  if (in_quotes) throw InputError("unterminated quoted field");
  if (!field.empty() || !record.empty()) end_record();
  return records;
}

Cell normalize_cell(const std::string& raw) {
  std::string t = text::trim(raw);
  if (t.empty()) return std::nullopt;
  return t;
}

}  // namespace

std::string ColumnId::to_string() const {
  return dataset + "#" + std::to_string(index);
}

std::vector<std::string> Dataset::headers() const {
  std::vector<std::string> out;
  out.reserve(columns.size());
  for (const auto& c : columns) out.push_back(c.header);
  return out;
}

std::vector<Cell> Dataset::row(std::size_t i) const {
  std::vector<Cell> out;
  out.reserve(columns.size());
  for (const auto& c : columns) out.push_back(c.values.at(i));
  return out;
}

Dataset parse_table(std::string id, std::string_view body, char delimiter) {
  auto records = parse_records(body, delimiter);
  if (records.empty()) throw InputError("no header row");

  std::size_t width = 0;
  for (const auto& r : records) width = std::max(width, r.size());

  Dataset ds;
  ds.id = std::move(id);
  ds.name = fs::path(ds.id).stem().string();
  ds.row_count = records.size() - 1;
  ds.columns.resize(width);
  for (std::size_t c = 0; c < width; ++c) {
    Column& col = ds.columns[c];
    col.id = ColumnId{ds.id, c};
    std::string header =
        c < records[0].size() ? text::collapse_whitespace(records[0][c]) : "";
    col.header = header.empty() ? "column_" + std::to_string(c) : header;
    col.values.reserve(ds.row_count);
    for (std::size_t r = 1; r < records.size(); ++r) {
      const auto& rec = records[r];
      col.values.push_back(c < rec.size() ? normalize_cell(rec[c]) : std::nullopt);
    }
  }
  return ds;
}

Repository load_repository(const fs::path& root) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) {
    throw InputError("input directory not readable: " + root.string());
  }
  std::vector<fs::path> files;
  fs::recursive_directory_iterator it(root, ec);
  if (ec) throw InputError("cannot list " + root.string() + ": " + ec.message());
  for (const auto& entry : it) {
    if (!entry.is_regular_file()) continue;
    std::string ext = text::to_lower(entry.path().extension().string());
    if (ext == ".csv" || ext == ".tsv") files.push_back(entry.path());
  }

  Repository repo;
  for (const auto& file : files) {
    std::string id = fs::relative(file, root).generic_string();
    std::ifstream in(file, std::ios::binary);
    if (!in) {
      repo.warnings.push_back(id + ": cannot open file");
      continue;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    char delim = text::to_lower(file.extension().string()) == ".tsv" ? '\t' : ',';
    try {
      repo.datasets.push_back(parse_table(id, buf.str(), delim));
    } catch (const InputError& e) {
      repo.warnings.push_back(id + ": " + e.what());
    }
  }
  std::sort(repo.datasets.begin(), repo.datasets.end(),
            [](const Dataset& a, const Dataset& b) { return a.id < b.id; });
  return repo;
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view key) {
  // splitmix64 finalizer over the combined value
  std::uint64_t z = seed ^ text::fnv1a(key);
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

// Partial Fisher-Yates over [0, n) with raw engine output so the draw is
// identical across standard library implementations.
std::vector<std::size_t> draw_indices(std::size_t n, std::size_t k,
                                      std::uint64_t seed) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::mt19937_64 rng(seed);
  k = std::min(k, n);
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng() % (n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  return idx;
}

}  // namespace

RowSample sample_rows(const Dataset& dataset, std::size_t n, std::uint64_t seed,
                      SampleStrategy strategy) {
  RowSample sample;
  sample.dataset_id = dataset.id;
  sample.headers = dataset.headers();
  std::vector<std::size_t> picked;
  if (strategy == SampleStrategy::kHead || dataset.row_count <= n) {
    picked.resize(std::min(n, dataset.row_count));
    std::iota(picked.begin(), picked.end(), 0);
  } else {
    picked = draw_indices(dataset.row_count, n, derive_seed(seed, dataset.id));
    std::sort(picked.begin(), picked.end());
  }
  for (std::size_t r : picked) sample.rows.push_back(dataset.row(r));
  return sample;
}

std::vector<std::string> sample_column_values(std::span<const Cell> values,
                                              std::size_t k, bool unique,
                                              std::uint64_t seed) {
  std::vector<std::string> pool;
  std::set<std::string> seen;
  for (const auto& v : values) {
    if (!v) continue;
    if (unique && !seen.insert(*v).second) continue;
    pool.push_back(*v);
  }
  if (pool.size() <= k) return pool;
  std::vector<std::string> out;
  for (std::size_t i : draw_indices(pool.size(), k, seed)) out.push_back(pool[i]);
  return out;
}

std::vector<std::string> sample_column_values(const Column& column, std::size_t k,
                                              bool unique, std::uint64_t seed) {
  return sample_column_values(std::span<const Cell>(column.values), k, unique,
                              derive_seed(seed, column.id.to_string()));
}

}  // namespace tabschema
