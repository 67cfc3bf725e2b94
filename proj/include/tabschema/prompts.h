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

#ifndef TABSCHEMA_PROMPTS_H_
#define TABSCHEMA_PROMPTS_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "tabschema/table_store.h"

namespace tabschema {

enum class TemplateId {
  kHierarchy,
  kHierarchyFetStage1,
  kIsaCheck,
  kAttrName,
  kAttrResolution,
  kNeCheck,
  kToplevelMatch,
  kSpecificSelect,
  kPredicateName,
};

std::string_view to_string(TemplateId id);
std::optional<TemplateId> template_from_string(std::string_view s);

struct Shot {
  std::string input;
  std::string output;

  bool operator==(const Shot&) const = default;
};

inline constexpr double kDefaultTemperature = 0.1;

struct PromptRequest {
  TemplateId template_id = TemplateId::kHierarchy;
  std::string rendered_text;
  std::vector<Shot> shots;
  double temperature = kDefaultTemperature;
  int max_tokens = 256;
  // Re-prompt counter. Part of the cache key so a re-run after a rejected
  // completion is a distinct request.
  int attempt = 0;
  // Structured template inputs. Not part of the cache key; scripted
  // providers read them instead of parsing rendered_text.
  nlohmann::json vars = nlohmann::json::object();
};

// Hierarchy prompt constraint modes.
enum class PromptMode { kOri, kAbs, kSlc, kFet, kFull };

std::string_view to_string(PromptMode mode);
std::optional<PromptMode> mode_from_string(std::string_view s);
inline bool needs_fet_types(PromptMode m) {
  return m == PromptMode::kFet || m == PromptMode::kFull;
}

// Few-shot exemplars per template. Defaults ship in data/exemplars.json and
// are compiled into the library.
class Exemplars {
 public:
  static const Exemplars& defaults();
  static Exemplars from_json(const nlohmann::json& j);

  const std::vector<Shot>& shots(TemplateId id) const;

 private:
  std::map<TemplateId, std::vector<Shot>> shots_;
};

// Abstract-type blacklist used by ABS mode (data/abstract_types.txt).
const std::vector<std::string>& default_abstract_types();
std::vector<std::string> parse_type_list(std::string_view body);

// Table text used inside prompts: header line then one line per row, cells
// separated by " | ".
std::string render_table(const RowSample& sample);

struct HierarchyPromptOptions {
  PromptMode mode = PromptMode::kOri;
  int n_max = 5;
  std::vector<std::string> abstract_blacklist;
  std::optional<std::vector<std::string>> fet_types;
};

PromptRequest render_hierarchy_prompt(const RowSample& sample,
                                      const HierarchyPromptOptions& options,
                                      const std::vector<Shot>& shots);
PromptRequest render_fet_stage1_prompt(const RowSample& sample,
                                       const std::vector<Shot>& shots);
PromptRequest render_isa_check_prompt(std::string_view parent, std::string_view child);
PromptRequest render_attr_name_prompt(const Column& column, std::string_view type_name,
                                      const std::vector<std::string>& values,
                                      const std::vector<Shot>& shots);
PromptRequest render_attr_resolution_prompt(const std::vector<std::string>& names,
                                            const std::vector<Shot>& shots);
PromptRequest render_ne_check_prompt(std::string_view attribute,
                                     const std::vector<std::string>& values,
                                     const std::vector<Shot>& shots);
PromptRequest render_toplevel_match_prompt(std::string_view source_type,
                                           std::string_view attribute,
                                           const std::vector<std::string>& values,
                                           const std::vector<std::string>& candidates,
                                           int k, const std::vector<Shot>& shots);
PromptRequest render_specific_select_prompt(std::string_view attribute,
                                            const std::vector<std::string>& values,
                                            std::string_view top_type,
                                            const std::vector<std::string>& candidates,
                                            const std::vector<Shot>& shots);
PromptRequest render_predicate_prompt(std::string_view source_type,
                                      std::string_view target_type,
                                      std::string_view attribute,
                                      const std::vector<Shot>& shots);

// First "yes"/"no" word, case-insensitive, punctuation ignored.
// Throws ParseError when neither appears.
bool parse_yes_no(std::string_view text);

}  // namespace tabschema

#endif  // TABSCHEMA_PROMPTS_H_
