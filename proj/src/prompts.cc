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

#include "tabschema/prompts.h"

#include <array>
#include <cctype>
#include <sstream>
#include <utility>

#include "tabschema/errors.h"
#include "tabschema/text.h"

namespace tabschema {
namespace embedded {
extern const std::string_view kExemplarsJson;
extern const std::string_view kAbstractTypes;
}  // namespace embedded

namespace {

constexpr std::array<std::pair<TemplateId, std::string_view>, 9> kTemplateNames{{
    {TemplateId::kHierarchy, "hierarchy"},
    {TemplateId::kHierarchyFetStage1, "hierarchy_fet_stage1"},
    {TemplateId::kIsaCheck, "isa_check"},
    {TemplateId::kAttrName, "attr_name"},
    {TemplateId::kAttrResolution, "attr_resolution"},
    {TemplateId::kNeCheck, "ne_check"},
    {TemplateId::kToplevelMatch, "toplevel_match"},
    {TemplateId::kSpecificSelect, "specific_select"},
    {TemplateId::kPredicateName, "predicate_name"},
}};

constexpr std::array<std::pair<PromptMode, std::string_view>, 5> kModeNames{{
    {PromptMode::kOri, "ORI"},
    {PromptMode::kAbs, "ABS"},
    {PromptMode::kSlc, "SLC"},
    {PromptMode::kFet, "FET"},
    {PromptMode::kFull, "FULL"},
}};

std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

// instruction, then each shot as "Example i:\n<input>\n<label>\n<output>",
// then the query input followed by the answer label.
std::string assemble(std::string_view instruction, const std::vector<Shot>& shots,
                     std::string_view query, std::string_view answer_label) {
  std::string out(instruction);
  out += "\n\n";
  for (std::size_t i = 0; i < shots.size(); ++i) {
    out += "Example " + std::to_string(i + 1) + ":\n";
    out += shots[i].input;
    out += "\n";
    out += answer_label;
    out += "\n";
    out += shots[i].output;
    out += "\n\n";
  }
  out += query;
  out += "\n";
  out += answer_label;
  return out;
}

PromptRequest make_request(TemplateId id, std::string text, const std::vector<Shot>& shots,
                           nlohmann::json vars) {
  PromptRequest req;
  req.template_id = id;
  req.rendered_text = std::move(text);
  req.shots = shots;
  req.vars = std::move(vars);
  return req;
}

std::string values_line(const std::vector<std::string>& values) {
  return "Values: " + join(values, " | ");
}

constexpr std::string_view kHierarchyInstruction =
    "You are an expert in conceptual modeling. Given sample rows of a table, "
    "infer the type hierarchy of the entities the table describes.\n"
    "- Write the hierarchy as a type path from the root type Thing to the most "
    "specific type, in the form Thing -> Type -> ... -> MostSpecificType.\n"
    "- A path has at most {N} types after Thing.\n"
    "- If several paths apply (for example multiple inheritance), write every "
    "path on its own line.\n"
    "- Use PascalCase type names and output only the path(s).";

constexpr std::string_view kAbsClause =
    "- Do not use any of the following abstract types in a path: ";

constexpr std::string_view kSlcClause =
    "- The second-layer types (direct children of Thing) should converge across "
    "all tables: semantically similar tables must share the same broad "
    "second-layer type instead of introducing divergent ones.";

constexpr std::string_view kFetClause =
    "- Every path must end at one of these most specific types, one path per "
    "type: ";

}  // namespace

std::string_view to_string(TemplateId id) {
  for (const auto& [k, v] : kTemplateNames) {
    if (k == id) return v;
  }
  return "unknown";
}

std::optional<TemplateId> template_from_string(std::string_view s) {
  for (const auto& [k, v] : kTemplateNames) {
    if (v == s) return k;
  }
  return std::nullopt;
}

std::string_view to_string(PromptMode mode) {
  for (const auto& [k, v] : kModeNames) {
    if (k == mode) return v;
  }
  return "ORI";
}

std::optional<PromptMode> mode_from_string(std::string_view s) {
  std::string upper(s);
  for (auto& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (const auto& [k, v] : kModeNames) {
    if (v == upper) return k;
  }
  return std::nullopt;
}

Exemplars Exemplars::from_json(const nlohmann::json& j) {
  Exemplars ex;
  for (auto it = j.begin(); it != j.end(); ++it) {
    auto id = template_from_string(it.key());
    if (!id) throw InputError("exemplars: unknown template '" + it.key() + "'");
    auto& list = ex.shots_[*id];
    for (const auto& shot : it.value()) {
      list.push_back(Shot{shot.at("input").get<std::string>(),
                          shot.at("output").get<std::string>()});
    }
  }
  return ex;
}

const Exemplars& Exemplars::defaults() {
  static const Exemplars kDefaults =
      from_json(nlohmann::json::parse(embedded::kExemplarsJson));
  return kDefaults;
}

const std::vector<Shot>& Exemplars::shots(TemplateId id) const {
  static const std::vector<Shot> kNone;
  auto it = shots_.find(id);
  return it == shots_.end() ? kNone : it->second;
}

std::vector<std::string> parse_type_list(std::string_view body) {
  std::vector<std::string> out;
  for (const auto& line : text::split_lines(body)) {
    std::string t = text::collapse_whitespace(line);
    if (t.empty() || t[0] == '#') continue;
    out.push_back(t);
  }
  return out;
}

const std::vector<std::string>& default_abstract_types() {
  static const std::vector<std::string> kTypes = parse_type_list(embedded::kAbstractTypes);
  return kTypes;
}

std::string render_table(const RowSample& sample) {
  std::string out = join(sample.headers, " | ");
  for (const auto& row : sample.rows) {
    out += "\n";
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += " | ";
      if (row[i]) out += *row[i];
    }
  }
  return out;
}

PromptRequest render_hierarchy_prompt(const RowSample& sample,
                                      const HierarchyPromptOptions& options,
                                      const std::vector<Shot>& shots) {
  if (options.n_max < 1) throw PreconditionError("n_max must be positive");
  std::string instruction(kHierarchyInstruction);
  instruction.replace(instruction.find("{N}"), 3, std::to_string(options.n_max));

  const bool abs = options.mode == PromptMode::kAbs;
  const bool slc = options.mode == PromptMode::kSlc || options.mode == PromptMode::kFull;
  const bool fet = needs_fet_types(options.mode);
  if (abs && options.abstract_blacklist.empty()) {
    throw PreconditionError("ABS mode requires a non-empty abstract-type blacklist");
  }
  if (fet && (!options.fet_types || options.fet_types->empty())) {
    throw PreconditionError(std::string(to_string(options.mode)) +
                            " mode requires most-specific types from the stage-1 prompt");
  }
  if (abs) {
    instruction += "\n";
    instruction += kAbsClause;
    instruction += join(options.abstract_blacklist, ", ") + ".";
  }
  if (slc) {
    instruction += "\n";
    instruction += kSlcClause;
  }
  if (fet) {
    instruction += "\n";
    instruction += kFetClause;
    instruction += join(*options.fet_types, ", ") + ".";
  }

  nlohmann::json vars{{"dataset_id", sample.dataset_id},
                      {"mode", to_string(options.mode)},
                      {"n_max", options.n_max},
                      {"headers", sample.headers}};
  if (options.fet_types) vars["fet_types"] = *options.fet_types;
  return make_request(TemplateId::kHierarchy,
                      assemble(instruction, shots, "Table:\n" + render_table(sample), "Output:"),
                      shots, std::move(vars));
}

PromptRequest render_fet_stage1_prompt(const RowSample& sample,
                                       const std::vector<Shot>& shots) {
  constexpr std::string_view kInstruction =
      "Given sample rows of a table, infer the most specific type(s) of the "
      "entities the table describes. Use PascalCase type names and answer "
      "with the type name(s) only, separated by commas.";
  return make_request(
      TemplateId::kHierarchyFetStage1,
      assemble(kInstruction, shots, "Table:\n" + render_table(sample), "Most specific type(s):"),
      shots, {{"dataset_id", sample.dataset_id}, {"headers", sample.headers}});
}

PromptRequest render_isa_check_prompt(std::string_view parent, std::string_view child) {
  if (parent.empty() || child.empty()) throw PreconditionError("type names must be non-empty");
  std::string textv = "Is " + std::string(parent) + " the parent type of " +
                      std::string(child) + "? Only answer yes or no.";
  return make_request(TemplateId::kIsaCheck, std::move(textv), {},
                      {{"parent", parent}, {"child", child}});
}

PromptRequest render_attr_name_prompt(const Column& column, std::string_view type_name,
                                      const std::vector<std::string>& values,
                                      const std::vector<Shot>& shots) {
  constexpr std::string_view kInstruction =
      "Infer a canonical attribute name for a table column, using its header "
      "and sample cell values. The table describes entities of the given type. "
      "Answer with a single snake_case attribute name only.";
  std::string query = "Table type: " + std::string(type_name) +
                      "\nColumn header: " + column.header + "\n" + values_line(values);
  return make_request(TemplateId::kAttrName,
                      assemble(kInstruction, shots, query, "Attribute name:"), shots,
                      {{"dataset_id", column.id.dataset},
                       {"column_index", column.id.index},
                       {"header", column.header},
                       {"type", type_name},
                       {"values", values}});
}

PromptRequest render_attr_resolution_prompt(const std::vector<std::string>& names,
                                            const std::vector<Shot>& shots) {
  constexpr std::string_view kInstruction =
      "Group the attribute names below so that semantically equivalent variants "
      "share a group, and give every group one canonical name. A group may "
      "contain a single name. Every name must appear in exactly one group. "
      "Answer one group per line as: canonical_name: name, name, ...";
  std::string query = "Names:\n" + join(names, "\n");
  return make_request(TemplateId::kAttrResolution,
                      assemble(kInstruction, shots, query, "Groups:"), shots,
                      {{"names", names}});
}

PromptRequest render_ne_check_prompt(std::string_view attribute,
                                     const std::vector<std::string>& values,
                                     const std::vector<Shot>& shots) {
  constexpr std::string_view kInstruction =
      "Do the sample values of the attribute denote named entities, i.e. "
      "specific real-world people, organizations, places, works or other "
      "things with a proper name? Only answer yes or no.";
  std::string query = "Attribute: " + std::string(attribute) + "\n" + values_line(values);
  return make_request(TemplateId::kNeCheck, assemble(kInstruction, shots, query, "Answer:"),
                      shots, {{"attribute", attribute}, {"values", values}});
}

PromptRequest render_toplevel_match_prompt(std::string_view source_type,
                                           std::string_view attribute,
                                           const std::vector<std::string>& values,
                                           const std::vector<std::string>& candidates,
                                           int k, const std::vector<Shot>& shots) {
  std::string instruction =
      "The sample values of an attribute are instances of some other type. "
      "From the candidate top-level types, pick up to " +
      std::to_string(k) +
      " that the values belong to, ranked from most to least relevant, one per "
      "line. Answer None if no candidate fits.";
  std::string query = "Source type: " + std::string(source_type) +
                      "\nAttribute: " + std::string(attribute) + "\n" +
                      values_line(values) + "\nCandidates: " + join(candidates, ", ");
  return make_request(TemplateId::kToplevelMatch,
                      assemble(instruction, shots, query, "Top-level types:"), shots,
                      {{"source_type", source_type},
                       {"attribute", attribute},
                       {"values", values},
                       {"candidates", candidates},
                       {"k", k}});
}

PromptRequest render_specific_select_prompt(std::string_view attribute,
                                            const std::vector<std::string>& values,
                                            std::string_view top_type,
                                            const std::vector<std::string>& candidates,
                                            const std::vector<Shot>& shots) {
  constexpr std::string_view kInstruction =
      "The sample values of an attribute are instances of the given top-level "
      "type. Select the most specific candidate type the values belong to. "
      "Answer with exactly one candidate name, or None if no candidate fits.";
  std::string query = "Attribute: " + std::string(attribute) + "\n" + values_line(values) +
                      "\nTop-level type: " + std::string(top_type) +
                      "\nCandidates: " + join(candidates, ", ");
  return make_request(TemplateId::kSpecificSelect,
                      assemble(kInstruction, shots, query, "Most specific type:"), shots,
                      {{"attribute", attribute},
                       {"values", values},
                       {"top_type", top_type},
                       {"candidates", candidates}});
}

PromptRequest render_predicate_prompt(std::string_view source_type,
                                      std::string_view target_type,
                                      std::string_view attribute,
                                      const std::vector<Shot>& shots) {
  constexpr std::string_view kInstruction =
      "An attribute of the source type has values that are instances of the "
      "target type. Name the relationship from the source type to the target "
      "type with a short camelCase verb phrase derived from the attribute. "
      "Answer with the label only.";
  std::string query = "Source type: " + std::string(source_type) +
                      "\nAttribute: " + std::string(attribute) +
                      "\nTarget type: " + std::string(target_type);
  return make_request(TemplateId::kPredicateName,
                      assemble(kInstruction, shots, query, "Predicate:"), shots,
                      {{"source_type", source_type},
                       {"target_type", target_type},
                       {"attribute", attribute}});
}

bool parse_yes_no(std::string_view answer) {
  std::string word;
  auto decide = [&word]() -> std::optional<bool> {
    if (word == "yes") return true;
    if (word == "no") return false;
    return std::nullopt;
  };
  for (char c : answer) {
    if (std::isalpha(static_cast<unsigned char>(c))) {
      word.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
      continue;
    }
    if (auto v = decide()) return *v;
    word.clear();
  }
  if (auto v = decide()) return *v;
  throw ParseError("expected yes or no, got: " + std::string(answer.substr(0, 80)));
}

}  // namespace tabschema
