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

#ifndef TABSCHEMA_SCHEMA_H_
#define TABSCHEMA_SCHEMA_H_

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tabschema/attributes.h"
#include "tabschema/hierarchy.h"
#include "tabschema/relations.h"

namespace tabschema {

// Types, is-a hierarchy, attributes and relationships inferred for a
// repository. Stage-gated runs leave the later sections absent.
struct ConceptualSchema {
  GlobalHierarchy hierarchy;
  std::optional<TypeAttributes> attributes;
  std::optional<std::vector<Relationship>> relationships;
  nlohmann::json provenance = nlohmann::json::object();

  bool operator==(const ConceptualSchema&) const = default;
};

// Stable document: sorted keys and arrays, two-space indent, trailing newline.
nlohmann::json schema_to_json(const ConceptualSchema& schema);
std::string serialize_schema(const ConceptualSchema& schema);
// Throws InputError on a malformed document.
ConceptualSchema schema_from_json(const nlohmann::json& j);
ConceptualSchema parse_schema(std::string_view body);
ConceptualSchema load_schema(const std::filesystem::path& path);

// Graphviz: is-a edges solid, relationships dashed and labeled with their
// predicate, attributes listed inside node labels.
std::string export_dot(const ConceptualSchema& schema);
// Indented per-type listing for humans.
std::string export_summary(const ConceptualSchema& schema);

}  // namespace tabschema

#endif  // TABSCHEMA_SCHEMA_H_
