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

#ifndef TABSCHEMA_TEXT_H_
#define TABSCHEMA_TEXT_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace tabschema::text {

std::string trim(std::string_view s);

// Trims and collapses every internal whitespace run to one space.
std::string collapse_whitespace(std::string_view s);

std::vector<std::string> split(std::string_view s, char sep);
std::vector<std::string> split_lines(std::string_view s);

bool starts_with_ci(std::string_view s, std::string_view prefix);
std::string to_lower(std::string_view s);

// "Release Company" -> "release_company"; non-alphanumerics become
// separators, camel humps split ("ReleaseCompany" -> "release_company").
std::string to_snake_case(std::string_view s);

// "produced by" -> "producedBy"; an already camelCased token is kept.
std::string to_camel_case(std::string_view s);

// Removes surrounding quotes, backticks and trailing sentence punctuation.
std::string strip_decorations(std::string_view s);

// Drops list markers such as "- ", "* ", "1. ", "2) ".
std::string strip_list_marker(std::string_view s);

bool is_numeric(std::string_view s);

// 64-bit FNV-1a. Stable across platforms; used to derive per-item seeds.
std::uint64_t fnv1a(std::string_view s);

// Lowercase hex SHA-256 digest.
std::string sha256_hex(std::string_view s);

}  // namespace tabschema::text

#endif  // TABSCHEMA_TEXT_H_
