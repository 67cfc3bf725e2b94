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

#include "tabschema/attributes.h"

#include <algorithm>

#include "tabschema/errors.h"
#include "tabschema/text.h"

namespace tabschema {
namespace {

std::string clean_answer_line(std::string_view raw, std::string_view label) {
  for (const auto& line : text::split_lines(raw)) {
    std::string t = text::strip_list_marker(line);
    if (text::starts_with_ci(t, label)) t = text::trim(std::string_view(t).substr(label.size()));
    t = text::strip_decorations(t);
    if (!t.empty()) return t;
  }
  return {};
}

std::string canonical_token(std::string_view s) {
  std::string t = text::collapse_whitespace(text::strip_decorations(text::strip_list_marker(s)));
  std::replace(t.begin(), t.end(), ' ', '_');
  return t;
}

// Maps an answer token back onto an input name: exact match first, then
// snake_case equality.
std::optional<std::string> match_name(const std::string& token,
                                      const std::set<std::string>& names,
                                      const std::map<std::string, std::string>& by_snake) {
  if (names.count(token)) return token;
  auto it = by_snake.find(text::to_snake_case(token));
  if (it != by_snake.end()) return it->second;
  return std::nullopt;
}

}  // namespace

std::string infer_attribute_name(const Column& column, const Dataset& dataset,
                                 const std::string& type_name, const AttributeOptions& options,
                                 Gateway& gateway, RunReport& report) {
  (void)dataset;
  auto values = sample_column_values(column, options.value_sample_k, false, options.seed);
  const auto& shots = gateway.exemplars().shots(TemplateId::kAttrName);
  for (int attempt = 0; attempt <= options.retry_budget; ++attempt) {
    PromptRequest req = render_attr_name_prompt(column, type_name, values, shots);
    req.attempt = attempt;
    std::string name =
        text::to_snake_case(clean_answer_line(gateway.complete(req).text, "Attribute name:"));
    if (!name.empty()) return name;
  }
  std::string fallback = text::to_snake_case(column.header);
  if (fallback.empty()) fallback = "column_" + std::to_string(column.id.index);
  report.flag("attributes", "name_fallback", column.id.to_string(), fallback);
  return fallback;
}

std::vector<AttributeGroup> repair_partition(std::vector<AttributeGroup> groups,
                                             const std::set<std::string>& names) {
  std::set<std::string> claimed;
  std::map<std::string, AttributeGroup> by_canonical;  // repeated labels merge
  for (auto& g : groups) {
    std::set<std::string> kept;
    for (const auto& m : g.members) {
      if (names.count(m) && !claimed.count(m)) kept.insert(m);
    }
    if (kept.empty()) continue;
    claimed.insert(kept.begin(), kept.end());
    std::string canonical = g.canonical_name.empty() ? *kept.begin() : g.canonical_name;
    auto& out = by_canonical[canonical];
    out.canonical_name = canonical;
    out.members.insert(kept.begin(), kept.end());
  }
  for (const auto& n : names) {
    if (claimed.count(n)) continue;
    auto& out = by_canonical[n];
    out.canonical_name = n;
    out.members.insert(n);
  }
  std::vector<AttributeGroup> out;
  for (auto& [_, g] : by_canonical) out.push_back(std::move(g));
  return out;
}

std::vector<AttributeGroup> parse_resolution(std::string_view raw,
                                             const std::set<std::string>& names) {
  std::map<std::string, std::string> by_snake;
  for (const auto& n : names) by_snake.emplace(text::to_snake_case(n), n);

  std::vector<AttributeGroup> groups;
  bool any_shape = false;
  for (const auto& line : text::split_lines(raw)) {
    auto colon = line.find(':');
    if (colon == std::string::npos) continue;
    std::string canonical = canonical_token(line.substr(0, colon));
    if (canonical.empty()) continue;
    any_shape = true;
    AttributeGroup g;
    g.canonical_name = canonical;
    for (const auto& piece : text::split(line.substr(colon + 1), ',')) {
      std::string token = canonical_token(piece);
      if (token.empty()) continue;
      if (auto m = match_name(token, names, by_snake)) g.members.insert(*m);
    }
    groups.push_back(std::move(g));
  }
  if (!any_shape) throw ParseError("resolution answer has no 'canonical: members' line");

  return repair_partition(std::move(groups), names);
}

namespace {

std::vector<AttributeGroup> resolve_batch(const std::set<std::string>& names,
                                          const AttributeOptions& options, Gateway& gateway,
                                          RunReport& report) {
  if (names.empty()) return {};
  if (names.size() == 1) return {AttributeGroup{*names.begin(), names}};
  const auto& shots = gateway.exemplars().shots(TemplateId::kAttrResolution);
  std::vector<std::string> ordered(names.begin(), names.end());
  for (int attempt = 0; attempt <= options.retry_budget; ++attempt) {
    PromptRequest req = render_attr_resolution_prompt(ordered, shots);
    req.attempt = attempt;
    try {
      return parse_resolution(gateway.complete(req).text, names);
    } catch (const ParseError&) {
      continue;
    }
  }
  report.flag("attributes", "resolution_identity", ordered.front(),
              std::to_string(names.size()) + " names left ungrouped");
  return repair_partition({}, names);
}

}  // namespace

std::vector<AttributeGroup> resolve_attribute_names(const std::set<std::string>& names,
                                                    const AttributeOptions& options,
                                                    Gateway& gateway, RunReport& report) {
  const std::size_t batch = std::max<std::size_t>(2, options.resolution_batch_size);
  if (names.size() <= batch) return resolve_batch(names, options, gateway, report);

  std::vector<AttributeGroup> groups;
  std::set<std::string> chunk;
  auto flush = [&] {
    for (auto& g : resolve_batch(chunk, options, gateway, report)) groups.push_back(std::move(g));
    chunk.clear();
  };
  for (const auto& n : names) {
    chunk.insert(n);
    if (chunk.size() == batch) flush();
  }
  if (!chunk.empty()) flush();

  // Cross-batch pass over batch canonical names.
  std::set<std::string> canonicals;
  for (const auto& g : groups) canonicals.insert(g.canonical_name);
  if (canonicals.size() >= names.size()) return repair_partition(std::move(groups), names);
  auto merged = resolve_attribute_names(canonicals, options, gateway, report);

  std::map<std::string, std::string> canonical_owner;
  for (const auto& m : merged) {
    for (const auto& c : m.members) canonical_owner[c] = m.canonical_name;
  }
  std::map<std::string, AttributeGroup> combined;
  for (const auto& g : groups) {
    const std::string& top = canonical_owner.at(g.canonical_name);
    auto& out = combined[top];
    out.canonical_name = top;
    out.members.insert(g.members.begin(), g.members.end());
  }
  std::vector<AttributeGroup> out;
  for (auto& [_, g] : combined) out.push_back(std::move(g));
  return repair_partition(std::move(out), names);
}

std::vector<ConceptualAttribute> promote_inherited(
    const std::string& parent,
    const std::map<std::string, std::vector<ConceptualAttribute>>& children,
    const AttributeOptions& options, Gateway& gateway, RunReport& report) {
  std::set<std::string> pooled;
  for (const auto& [_, atts] : children) {
    for (const auto& a : atts) pooled.insert(a.canonical_name);
  }
  if (pooled.empty() || children.empty()) return {};

  auto groups = resolve_attribute_names(pooled, options, gateway, report);
  const double n_children = static_cast<double>(children.size());
  std::vector<ConceptualAttribute> promoted;
  for (const auto& g : groups) {
    ConceptualAttribute attr;
    attr.canonical_name = g.canonical_name;
    attr.owner_type = parent;
    attr.inherited = true;
    attr.member_names = g.members;
    std::size_t contributing = 0;
    for (const auto& [_, atts] : children) {
      bool contributes = false;
      for (const auto& a : atts) {
        bool hit = g.members.count(a.canonical_name) > 0;
        for (const auto& m : a.member_names) hit = hit || g.members.count(m) > 0;
        if (!hit) continue;
        contributes = true;
        attr.dataset_columns.insert(a.dataset_columns.begin(), a.dataset_columns.end());
        attr.member_names.insert(a.member_names.begin(), a.member_names.end());
      }
      if (contributes) ++contributing;
    }
    // count / n >= theta, with slack for binary fractions such as 0.9
    if (static_cast<double>(contributing) >= options.theta * n_children - 1e-9) {
      report.count("attributes.promoted");
      promoted.push_back(std::move(attr));
    }
  }
  return promoted;
}

AttributeResult infer_attributes(const GlobalHierarchy& hierarchy,
                                 const std::vector<Dataset>& datasets,
                                 const AttributeOptions& options, Gateway& gateway,
                                 RunReport& report) {
  std::map<std::string, std::vector<const Dataset*>> by_type;
  for (const auto& d : datasets) {
    auto it = hierarchy.most_specific.find(d.id);
    if (it == hierarchy.most_specific.end()) continue;
    for (const auto& t : it->second) by_type[t].push_back(&d);
  }

  AttributeResult result;
  const std::string root(kRootType);
  for (const auto& type : hierarchy.dag.bottom_up_order()) {
    std::vector<ConceptualAttribute> atts;

    std::vector<const Column*> columns;
    std::vector<const Dataset*> owners;
    for (const Dataset* d : by_type[type]) {
      for (const auto& c : d->columns) {
        columns.push_back(&c);
        owners.push_back(d);
      }
    }
    std::vector<std::string> raw(columns.size());
    parallel_for(columns.size(), gateway.options().max_in_flight, [&](std::size_t i) {
      raw[i] = infer_attribute_name(*columns[i], *owners[i], type, options, gateway, report);
    });
    std::set<std::string> names(raw.begin(), raw.end());
    for (const auto& g : resolve_attribute_names(names, options, gateway, report)) {
      ConceptualAttribute a;
      a.canonical_name = g.canonical_name;
      a.member_names = g.members;
      a.owner_type = type;
      for (std::size_t i = 0; i < columns.size(); ++i) {
        if (g.members.count(raw[i])) a.dataset_columns.insert(columns[i]->id);
      }
      atts.push_back(std::move(a));
    }

    auto kids = hierarchy.dag.children(type);
    if (!kids.empty() && (type != root || options.promote_to_root)) {
      std::map<std::string, std::vector<ConceptualAttribute>> child_atts;
      for (const auto& k : kids) {
        auto it = result.attributes.find(k);
        child_atts[k] = it == result.attributes.end() ? std::vector<ConceptualAttribute>{}
                                                      : it->second;
      }
      for (auto& p : promote_inherited(type, child_atts, options, gateway, report)) {
        atts.push_back(std::move(p));
      }
    }
    std::sort(atts.begin(), atts.end());
    if (!atts.empty()) result.attributes[type] = std::move(atts);
    result.traversal.push_back(type);
  }
  return result;
}

}  // namespace tabschema
