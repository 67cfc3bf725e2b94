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

#include "tabschema/schema.h"

#include <fstream>
#include <functional>
#include <sstream>

#include "tabschema/errors.h"

namespace tabschema {

using nlohmann::json;

json schema_to_json(const ConceptualSchema& schema) {
  const auto& h = schema.hierarchy;
  std::map<std::string, std::set<std::string>> specific_for;
  for (const auto& [d, types] : h.most_specific) {
    for (const auto& t : types) specific_for[t].insert(d);
  }

  json types = json::array();
  for (const auto& n : h.dag.nodes()) {
    auto td = h.type_datasets.find(n);
    json datasets = td == h.type_datasets.end() ? json::array() : json(td->second);
    json specific = specific_for.count(n) ? json(specific_for[n]) : json::array();
    types.push_back({{"name", n}, {"datasets", datasets}, {"most_specific_for", specific}});
  }
  json edges = json::array();
  for (const auto& [e, w] : h.dag.edges()) {
    edges.push_back({{"parent", e.first}, {"child", e.second}, {"weight", w}});
  }

  json doc{{"types", types}, {"edges", edges}, {"provenance", schema.provenance}};
  if (schema.attributes) {
    json atts = json::array();
    for (const auto& [type, list] : *schema.attributes) {
      for (const auto& a : list) {
        json cols = json::array();
        for (const auto& c : a.dataset_columns) {
          cols.push_back({{"dataset", c.dataset}, {"column", c.index}});
        }
        atts.push_back({{"type", type},
                        {"canonical_name", a.canonical_name},
                        {"inherited", a.inherited},
                        {"member_names", a.member_names},
                        {"columns", cols}});
      }
    }
    doc["attributes"] = atts;
  }
  if (schema.relationships) {
    json rels = json::array();
    for (const auto& r : *schema.relationships) {
      rels.push_back({{"source", r.source_type},
                      {"attribute", r.attribute},
                      {"target", r.target_type},
                      {"predicate", r.predicate}});
    }
    doc["relationships"] = rels;
  }
  return doc;
}

std::string serialize_schema(const ConceptualSchema& schema) {
  return schema_to_json(schema).dump(2) + "\n";
}

ConceptualSchema schema_from_json(const json& j) {
  try {
    ConceptualSchema s;
    auto& h = s.hierarchy;
    for (const auto& t : j.at("types")) {
      const auto name = t.at("name").get<std::string>();
      h.dag.add_node(name);
      auto datasets = t.at("datasets").get<std::set<std::string>>();
      if (!datasets.empty()) h.type_datasets[name] = std::move(datasets);
      for (const auto& d : t.value("most_specific_for", json::array())) {
        h.most_specific[d.get<std::string>()].insert(name);
      }
    }
    for (const auto& e : j.at("edges")) {
      h.dag.add_edge(e.at("parent").get<std::string>(), e.at("child").get<std::string>(),
                     e.at("weight").get<long>());
    }
    s.provenance = j.value("provenance", json::object());
    if (j.contains("attributes")) {
      TypeAttributes atts;
      for (const auto& a : j.at("attributes")) {
        ConceptualAttribute ca;
        ca.owner_type = a.at("type").get<std::string>();
        ca.canonical_name = a.at("canonical_name").get<std::string>();
        ca.inherited = a.at("inherited").get<bool>();
        ca.member_names = a.at("member_names").get<std::set<std::string>>();
        for (const auto& c : a.at("columns")) {
          ca.dataset_columns.insert(
              ColumnId{c.at("dataset").get<std::string>(), c.at("column").get<std::size_t>()});
        }
        atts[ca.owner_type].push_back(std::move(ca));
      }
      for (auto& [_, list] : atts) std::sort(list.begin(), list.end());
      s.attributes = std::move(atts);
    }
    if (j.contains("relationships")) {
      std::vector<Relationship> rels;
      for (const auto& r : j.at("relationships")) {
        rels.push_back(Relationship{r.at("source").get<std::string>(),
                                    r.at("attribute").get<std::string>(),
                                    r.at("target").get<std::string>(),
                                    r.at("predicate").get<std::string>()});
      }
      std::sort(rels.begin(), rels.end());
      s.relationships = std::move(rels);
    }
    return s;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed schema document: ") + e.what());
  }
}

ConceptualSchema parse_schema(std::string_view body) {
  json j = json::parse(body, nullptr, false);
  if (j.is_discarded()) throw InputError("schema document is not valid JSON");
  return schema_from_json(j);
}

ConceptualSchema load_schema(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read schema " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_schema(buf.str());
}

namespace {

std::string dot_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out + "\"";
}

// Escapes for use inside a quoted label that uses \l line breaks.
std::string dot_label_text(std::string_view s) {
  std::string q = dot_quote(s);
  return q.substr(1, q.size() - 2);
}

}  // namespace

std::string export_dot(const ConceptualSchema& schema) {
  const auto& h = schema.hierarchy;
  std::ostringstream out;
  out << "digraph schema {\n";
  out << "  rankdir=TB;\n";
  out << "  node [shape=box, fontname=\"Helvetica\"];\n";
  for (const auto& n : h.dag.nodes()) {
    std::string label = dot_label_text(n);
    if (schema.attributes) {
      auto it = schema.attributes->find(n);
      if (it != schema.attributes->end() && !it->second.empty()) {
        label += "\\n";
        for (const auto& a : it->second) {
          label += dot_label_text(a.inherited ? "^ " + a.canonical_name : a.canonical_name);
          label += "\\l";
        }
      }
    }
    out << "  " << dot_quote(n) << " [label=\"" << label << "\"];\n";
  }
  for (const auto& [e, w] : h.dag.edges()) {
    out << "  " << dot_quote(e.first) << " -> " << dot_quote(e.second)
        << " [style=solid, weight=" << std::max(1L, w) << "];\n";
  }
  if (schema.relationships) {
    for (const auto& r : *schema.relationships) {
      out << "  " << dot_quote(r.source_type) << " -> " << dot_quote(r.target_type)
          << " [style=dashed, constraint=false, label=" << dot_quote(r.predicate)
          << ", tooltip=" << dot_quote(r.attribute) << "];\n";
    }
  }
  out << "}\n";
  return out.str();
}

std::string export_summary(const ConceptualSchema& schema) {
  const auto& h = schema.hierarchy;
  std::ostringstream out;
  out << "Types: " << (h.dag.nodes().empty() ? 0 : h.dag.nodes().size() - 1)
      << " (excluding Thing)\n\n";

  std::function<void(const std::string&, int)> walk = [&](const std::string& t, int depth) {
    std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
    auto td = h.type_datasets.find(t);
    std::size_t tables = td == h.type_datasets.end() ? 0 : td->second.size();
    out << pad << t << " [" << tables << (tables == 1 ? " table]" : " tables]") << "\n";
    if (schema.attributes) {
      auto it = schema.attributes->find(t);
      if (it != schema.attributes->end()) {
        for (const auto& a : it->second) {
          out << pad << "  . " << a.canonical_name;
          if (a.inherited) out << " (inherited)";
          out << " <" << a.dataset_columns.size() << " columns>\n";
        }
      }
    }
    for (const auto& c : h.dag.children(t)) walk(c, depth + 1);
  };
  walk(std::string(kRootType), 0);

  if (schema.relationships) {
    out << "\nRelationships: " << schema.relationships->size() << "\n";
    for (const auto& r : *schema.relationships) {
      out << "  " << r.source_type << " --" << r.predicate << "--> " << r.target_type
          << "  (via " << r.attribute << ")\n";
    }
  }
  return out.str();
}

}  // namespace tabschema
