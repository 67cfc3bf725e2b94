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

#ifndef TABSCHEMA_ATTRIBUTES_H_
#define TABSCHEMA_ATTRIBUTES_H_

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "tabschema/gateway.h"
#include "tabschema/hierarchy.h"
#include "tabschema/run_report.h"
#include "tabschema/table_store.h"

namespace tabschema {

// Canonical attribute of a type, aligned with the source columns it covers.
// Inherited attributes aggregate the columns of the children they came from.
struct ConceptualAttribute {
  std::string canonical_name;
  std::set<ColumnId> dataset_columns;
  std::set<std::string> member_names;
  std::string owner_type;
  bool inherited = false;

  auto operator<=>(const ConceptualAttribute&) const = default;
};

struct AttributeGroup {
  std::string canonical_name;
  std::set<std::string> members;

  auto operator<=>(const AttributeGroup&) const = default;
};

struct AttributeOptions {
  double theta = 0.9;
  std::size_t value_sample_k = 5;
  std::uint64_t seed = 0;
  int retry_budget = 3;
  std::size_t resolution_batch_size = 60;
  bool promote_to_root = false;
};

using TypeAttributes = std::map<std::string, std::vector<ConceptualAttribute>>;

struct AttributeResult {
  TypeAttributes attributes;
  std::vector<std::string> traversal;  // order in which types were finalized
};

// snake_case attribute name for one column; falls back to the normalized
// header (flagged) when the oracle keeps answering with nothing.
std::string infer_attribute_name(const Column& column, const Dataset& dataset,
                                 const std::string& type_name, const AttributeOptions& options,
                                 Gateway& gateway, RunReport& report);

// Parses "canonical: a, b" lines and repairs the result into an exact
// partition of `names`. Throws ParseError when no line has a group shape.
std::vector<AttributeGroup> parse_resolution(std::string_view raw,
                                             const std::set<std::string>& names);

// Forces `groups` into a partition of `names`: unknown names dropped, a name
// claimed twice stays with its first group, missing names become singletons.
std::vector<AttributeGroup> repair_partition(std::vector<AttributeGroup> groups,
                                             const std::set<std::string>& names);

std::vector<AttributeGroup> resolve_attribute_names(const std::set<std::string>& names,
                                                    const AttributeOptions& options,
                                                    Gateway& gateway, RunReport& report);

// `children` maps every child of `parent` (including children without
// attributes) to its final attributes.
std::vector<ConceptualAttribute> promote_inherited(
    const std::string& parent,
    const std::map<std::string, std::vector<ConceptualAttribute>>& children,
    const AttributeOptions& options, Gateway& gateway, RunReport& report);

AttributeResult infer_attributes(const GlobalHierarchy& hierarchy,
                                 const std::vector<Dataset>& datasets,
                                 const AttributeOptions& options, Gateway& gateway,
                                 RunReport& report);

}  // namespace tabschema

#endif  // TABSCHEMA_ATTRIBUTES_H_
