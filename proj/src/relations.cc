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

#include "tabschema/relations.h"

#include <algorithm>

#include "tabschema/errors.h"
#include "tabschema/text.h"

namespace tabschema {
namespace {

std::string attribute_key(const ConceptualAttribute& a) {
  return a.owner_type + "/" + a.canonical_name;
}

std::optional<std::string> match_candidate(std::string_view token,
                                           const std::vector<std::string>& candidates) {
  std::string t = text::collapse_whitespace(text::strip_decorations(text::strip_list_marker(token)));
  if (t.empty()) return std::nullopt;
  for (const auto& c : candidates) {
    if (c == t) return c;
  }
  std::string lower = text::to_lower(t);
  for (const auto& c : candidates) {
    if (text::to_lower(c) == lower) return c;
  }
  return std::nullopt;
}

bool is_decline(std::string_view token) {
  std::string t = text::to_lower(text::strip_decorations(text::strip_list_marker(token)));
  return t == "none" || t == "null" || t == "n/a";
}

// Types under any top-level ancestor of `type`.
std::set<std::string> own_top_level_subtrees(const std::string& type, const GlobalHierarchy& h,
                                             const std::set<std::string>& tops) {
  std::set<std::string> out;
  for (const auto& a : h.dag.ancestors_or_self(type)) {
    if (!tops.count(a)) continue;
    auto sub = h.dag.descendants_or_self(a);
    out.insert(sub.begin(), sub.end());
  }
  return out;
}

}  // namespace

ColumnLookup::ColumnLookup(const std::vector<Dataset>& datasets) {
  for (const auto& d : datasets) by_id_[d.id] = &d;
}

const Column* ColumnLookup::find(const ColumnId& id) const {
  auto it = by_id_.find(id.dataset);
  if (it == by_id_.end() || id.index >= it->second->columns.size()) return nullptr;
  return &it->second->columns[id.index];
}

std::vector<std::string> sample_attribute_values(const ConceptualAttribute& attribute,
                                                 const ColumnLookup& columns, std::size_t k,
                                                 std::uint64_t seed) {
  std::vector<Cell> pooled;
  for (const auto& id : attribute.dataset_columns) {
    if (const Column* c = columns.find(id)) {
      pooled.insert(pooled.end(), c->values.begin(), c->values.end());
    }
  }
  return sample_column_values(pooled, k, true, derive_seed(seed, attribute_key(attribute)));
}

NamedEntityVerdict check_named_entity(const ConceptualAttribute& attribute,
                                      const std::vector<std::string>& samples,
                                      Gateway& gateway, RunReport& report) {
  NamedEntityVerdict verdict{attribute.canonical_name, false, samples};
  if (samples.empty()) {
    report.count("relations.ne_no_values");
    return verdict;
  }
  PromptRequest req = render_ne_check_prompt(attribute.canonical_name, samples,
                                             gateway.exemplars().shots(TemplateId::kNeCheck));
  std::string answer = gateway.complete(req).text;
  try {
    verdict.is_named_entity = parse_yes_no(answer);
  } catch (const ParseError&) {
    report.flag("relations", "ne_unparseable", attribute_key(attribute), answer.substr(0, 80));
  }
  return verdict;
}

std::vector<ConceptualAttribute> filter_named_entity_attributes(
    const std::vector<ConceptualAttribute>& attributes, const ColumnLookup& columns,
    const RelationOptions& options, Gateway& gateway, RunReport& report) {
  std::vector<ConceptualAttribute> kept;
  for (const auto& a : attributes) {
    auto samples = sample_attribute_values(a, columns, options.ne_sample_k, options.seed);
    if (check_named_entity(a, samples, gateway, report).is_named_entity) kept.push_back(a);
  }
  return kept;
}

std::vector<std::string> top_k_match_top_level_types(const std::string& source_type,
                                                     const ConceptualAttribute& attribute,
                                                     const std::vector<std::string>& samples,
                                                     const std::vector<std::string>& top_types,
                                                     int k, Gateway& gateway) {
  if (top_types.empty() || k < 1) return {};
  PromptRequest req =
      render_toplevel_match_prompt(source_type, attribute.canonical_name, samples, top_types, k,
                                   gateway.exemplars().shots(TemplateId::kToplevelMatch));
  std::vector<std::string> out;
  for (const auto& line : text::split_lines(gateway.complete(req).text)) {
    for (const auto& piece : text::split(line, ',')) {
      auto c = match_candidate(piece, top_types);
      if (!c || std::find(out.begin(), out.end(), *c) != out.end()) continue;
      out.push_back(*c);
      if (static_cast<int>(out.size()) == k) return out;
    }
  }
  return out;
}

std::optional<std::string> select_most_specific_type(
    const ConceptualAttribute& attribute, const std::vector<std::string>& samples,
    const std::string& top_type, const std::vector<std::string>& descendants,
    Gateway& gateway, RunReport& report) {
  if (descendants.empty()) return std::nullopt;
  PromptRequest req =
      render_specific_select_prompt(attribute.canonical_name, samples, top_type, descendants,
                                    gateway.exemplars().shots(TemplateId::kSpecificSelect));
  std::string answer = gateway.complete(req).text;
  for (const auto& line : text::split_lines(answer)) {
    if (text::trim(line).empty()) continue;
    if (is_decline(line)) return std::nullopt;
    if (auto c = match_candidate(line, descendants)) return c;
    report.flag("relations", "specific_out_of_set", attribute_key(attribute),
                text::trim(line).substr(0, 80));
    return std::nullopt;
  }
  return std::nullopt;
}

std::string name_relationship_predicate(const std::string& source_type,
                                        const std::string& target_type,
                                        const std::string& attribute, int retry_budget,
                                        Gateway& gateway, RunReport& report) {
  if (source_type == target_type) {
    throw PreconditionError("relationship endpoints must differ: " + source_type);
  }
  const auto& shots = gateway.exemplars().shots(TemplateId::kPredicateName);
  for (int attempt = 0; attempt <= retry_budget; ++attempt) {
    PromptRequest req = render_predicate_prompt(source_type, target_type, attribute, shots);
    req.attempt = attempt;
    for (const auto& line : text::split_lines(gateway.complete(req).text)) {
      std::string t = text::strip_list_marker(line);
      if (text::starts_with_ci(t, "Predicate:")) t = t.substr(10);
      std::string label = text::to_camel_case(text::strip_decorations(t));
      if (!label.empty()) return label;
    }
  }
  std::string fallback = "has_" + attribute;
  report.flag("relations", "predicate_fallback", source_type + "/" + attribute, fallback);
  return fallback;
}

std::vector<Relationship> discover_relationships(const std::string& source_type,
                                                 const GlobalHierarchy& hierarchy,
                                                 const TypeAttributes& attributes,
                                                 const ColumnLookup& columns,
                                                 const RelationOptions& options,
                                                 Gateway& gateway, RunReport& report) {
  auto it = attributes.find(source_type);
  if (it == attributes.end()) return {};

  const auto tops = top_level_types(hierarchy);
  const auto excluded = own_top_level_subtrees(source_type, hierarchy, tops);
  std::vector<std::string> candidate_tops;
  for (const auto& t : tops) {
    if (!excluded.count(t)) candidate_tops.push_back(t);
  }
  if (candidate_tops.empty()) return {};

  std::set<Relationship> out;
  for (const auto& a : filter_named_entity_attributes(it->second, columns, options, gateway,
                                                      report)) {
    auto samples = sample_attribute_values(a, columns, options.ne_sample_k, options.seed);
    for (const auto& top : top_k_match_top_level_types(source_type, a, samples, candidate_tops,
                                                       options.top_k, gateway)) {
      std::vector<std::string> desc;
      for (const auto& d : hierarchy.dag.descendants_or_self(top)) {
        if (!excluded.count(d)) desc.push_back(d);
      }
      auto target = select_most_specific_type(a, samples, top, desc, gateway, report);
      if (!target) continue;
      std::string predicate = name_relationship_predicate(
          source_type, *target, a.canonical_name, options.retry_budget, gateway, report);
      out.insert(Relationship{source_type, a.canonical_name, *target, std::move(predicate)});
    }
  }
  return {out.begin(), out.end()};
}

std::vector<Relationship> discover_all_relationships(const GlobalHierarchy& hierarchy,
                                                     const TypeAttributes& attributes,
                                                     const std::vector<Dataset>& datasets,
                                                     const RelationOptions& options,
                                                     Gateway& gateway, RunReport& report) {
  ColumnLookup columns(datasets);
  std::vector<std::string> sources;
  for (const auto& [type, atts] : attributes) {
    if (std::any_of(atts.begin(), atts.end(), [](const auto& a) { return !a.inherited; })) {
      sources.push_back(type);
    }
  }
  std::vector<std::vector<Relationship>> found(sources.size());
  parallel_for(sources.size(), gateway.options().max_in_flight, [&](std::size_t i) {
    found[i] = discover_relationships(sources[i], hierarchy, attributes, columns, options,
                                      gateway, report);
  });
  std::set<Relationship> all;
  for (auto& f : found) all.insert(f.begin(), f.end());
  report.count("relations.found", static_cast<long>(all.size()));
  return {all.begin(), all.end()};
}

}  // namespace tabschema
