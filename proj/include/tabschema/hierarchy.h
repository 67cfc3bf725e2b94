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

#ifndef TABSCHEMA_HIERARCHY_H_
#define TABSCHEMA_HIERARCHY_H_

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tabschema/gateway.h"
#include "tabschema/prompts.h"
#include "tabschema/run_report.h"
#include "tabschema/table_store.h"

namespace tabschema {

inline constexpr std::string_view kRootType = "Thing";

// Root-to-leaf chain produced for one table. types.front() == "Thing", no
// type repeats, and depth() (edges below Thing) is at most the configured cap.
struct TypePath {
  std::vector<std::string> types;
  std::string source_dataset;

  std::size_t depth() const { return types.empty() ? 0 : types.size() - 1; }
  const std::string& leaf() const { return types.back(); }
  auto operator<=>(const TypePath&) const = default;
};

using Edge = std::pair<std::string, std::string>;  // (parent, child)

// Type graph with per-edge occurrence weights.
class WeightedDag {
 public:
  void add_node(const std::string& node) { nodes_.insert(node); }
  // Adds `weight` to the edge, creating both nodes if needed.
  void add_edge(const std::string& parent, const std::string& child, long weight = 1);
  void remove_edge(const std::string& parent, const std::string& child);

  bool has_node(const std::string& node) const { return nodes_.count(node) > 0; }
  bool has_edge(const std::string& parent, const std::string& child) const;
  long weight(const std::string& parent, const std::string& child) const;

  const std::set<std::string>& nodes() const { return nodes_; }
  const std::map<Edge, long>& edges() const { return edges_; }
  std::vector<std::string> children(const std::string& node) const;
  std::vector<std::string> parents(const std::string& node) const;

  // Nodes reachable from `from`, including it.
  std::set<std::string> reachable_from(const std::string& from) const;
  std::set<std::string> ancestors_or_self(const std::string& node) const;
  std::set<std::string> descendants_or_self(const std::string& node) const { return reachable_from(node); }
  bool is_acyclic() const;
  // Nodes ordered so every child precedes all of its parents.
  std::vector<std::string> bottom_up_order() const;

  bool operator==(const WeightedDag&) const = default;

 private:
  std::set<std::string> nodes_;
  std::map<Edge, long> edges_;
};

struct GlobalHierarchy {
  WeightedDag dag;
  // Datasets whose leaf type is the key or one of its descendants.
  std::map<std::string, std::set<std::string>> type_datasets;
  // Leaf types of each dataset's paths.
  std::map<std::string, std::set<std::string>> most_specific;

  bool operator==(const GlobalHierarchy&) const = default;
};

struct HierarchyOptions {
  PromptMode mode = PromptMode::kOri;
  int n_max = 5;
  int retry_budget = 3;  // re-prompts after the first attempt
  std::size_t sample_rows = 5;
  SampleStrategy sample_strategy = SampleStrategy::kHead;
  std::uint64_t seed = 0;
  std::vector<std::string> abstract_blacklist;  // defaults used when empty
  bool judge = true;
};

// Normalized type name: trimmed, internal whitespace collapsed.
std::string normalize_type_name(std::string_view name);

// Parses a completion into a set of paths (sorted, deduplicated). Throws
// ParseError when no line yields a path, DepthError when a path is deeper
// than n_max.
std::vector<TypePath> parse_type_paths(std::string_view raw, int n_max,
                                       std::string_view dataset_id = {});

// Parses a most-specific-type answer ("Movie, Film"). May return empty.
std::vector<std::string> parse_type_list_answer(std::string_view raw);

// Empty result: the dataset could not be parsed within the retry budget;
// the reason is recorded in `report`.
std::vector<TypePath> infer_table_hierarchy(const Dataset& dataset,
                                            const HierarchyOptions& options,
                                            Gateway& gateway, RunReport& report);

// Edge weight = number of paths containing the consecutive pair.
WeightedDag merge_hierarchies(const std::vector<TypePath>& paths);

// Self-loop, inverse-edge and (optionally) LLM-judge pruning.
WeightedDag prune(WeightedDag dag, Gateway* gateway, bool judge, RunReport& report);

// Breaks residual cycles, reattaches orphans under Thing and computes the
// dataset bookkeeping from `paths`.
GlobalHierarchy repair_and_root(WeightedDag dag, const std::vector<TypePath>& paths,
                                RunReport& report);

std::set<std::string> top_level_types(const GlobalHierarchy& h);

// Full stage: per-table inference (parallel under the gateway bound), merge,
// prune, repair.
GlobalHierarchy build_hierarchy(const std::vector<Dataset>& datasets,
                                const HierarchyOptions& options, Gateway& gateway,
                                RunReport& report, std::vector<TypePath>* paths_out = nullptr);

}  // namespace tabschema

#endif  // TABSCHEMA_HIERARCHY_H_
