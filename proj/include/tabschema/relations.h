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

#ifndef TABSCHEMA_RELATIONS_H_
#define TABSCHEMA_RELATIONS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tabschema/attributes.h"
#include "tabschema/gateway.h"
#include "tabschema/hierarchy.h"
#include "tabschema/run_report.h"
#include "tabschema/table_store.h"

namespace tabschema {

// <source type, attribute, target type> with a predicate label. Source and
// target always sit under different top-level types.
struct Relationship {
  std::string source_type;
  std::string attribute;
  std::string target_type;
  std::string predicate;

  auto operator<=>(const Relationship&) const = default;
};

struct NamedEntityVerdict {
  std::string attribute;
  bool is_named_entity = false;
  std::vector<std::string> sample_used;
};

struct RelationOptions {
  int top_k = 1;
  std::size_t ne_sample_k = 5;
  std::uint64_t seed = 0;
  int retry_budget = 3;
};

// Resolves ColumnIds to loaded columns.
class ColumnLookup {
 public:
  explicit ColumnLookup(const std::vector<Dataset>& datasets);
  const Column* find(const ColumnId& id) const;

 private:
  std::map<std::string, const Dataset*> by_id_;
};

// k unique non-null values pooled over all of the attribute's columns.
std::vector<std::string> sample_attribute_values(const ConceptualAttribute& attribute,
                                                 const ColumnLookup& columns, std::size_t k,
                                                 std::uint64_t seed);

// Asks the oracle whether `samples` are named entities. An empty sample is a
// "no" without a call; an unparseable answer is a flagged "no".
NamedEntityVerdict check_named_entity(const ConceptualAttribute& attribute,
                                      const std::vector<std::string>& samples,
                                      Gateway& gateway, RunReport& report);

std::vector<ConceptualAttribute> filter_named_entity_attributes(
    const std::vector<ConceptualAttribute>& attributes, const ColumnLookup& columns,
    const RelationOptions& options, Gateway& gateway, RunReport& report);

// Oracle ranking restricted to `top_types`, at most k entries.
std::vector<std::string> top_k_match_top_level_types(const std::string& source_type,
                                                     const ConceptualAttribute& attribute,
                                                     const std::vector<std::string>& samples,
                                                     const std::vector<std::string>& top_types,
                                                     int k, Gateway& gateway);

// One of `descendants`, or nullopt when the oracle declines or answers
// outside the candidate set.
std::optional<std::string> select_most_specific_type(
    const ConceptualAttribute& attribute, const std::vector<std::string>& samples,
    const std::string& top_type, const std::vector<std::string>& descendants,
    Gateway& gateway, RunReport& report);

std::string name_relationship_predicate(const std::string& source_type,
                                        const std::string& target_type,
                                        const std::string& attribute, int retry_budget,
                                        Gateway& gateway, RunReport& report);

std::vector<Relationship> discover_relationships(const std::string& source_type,
                                                 const GlobalHierarchy& hierarchy,
                                                 const TypeAttributes& attributes,
                                                 const ColumnLookup& columns,
                                                 const RelationOptions& options,
                                                 Gateway& gateway, RunReport& report);

// Every type owning at least one non-inherited attribute, sorted output.
std::vector<Relationship> discover_all_relationships(const GlobalHierarchy& hierarchy,
                                                     const TypeAttributes& attributes,
                                                     const std::vector<Dataset>& datasets,
                                                     const RelationOptions& options,
                                                     Gateway& gateway, RunReport& report);

}  // namespace tabschema

#endif  // TABSCHEMA_RELATIONS_H_
