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

#ifndef TABSCHEMA_EVAL_H_
#define TABSCHEMA_EVAL_H_

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "tabschema/hierarchy.h"
#include "tabschema/relations.h"
#include "tabschema/schema.h"
#include "tabschema/table_store.h"

namespace tabschema {

// Ground-truth annotations. On disk (all tab-separated, '#' comments):
//   tables.tsv         dataset_id, top_type, specific_type (may be empty)
//   hierarchy.tsv      parent, child
//   columns.tsv        dataset_id, column_index, label
//   relationships.tsv  source_type, target_type
// Only tables.tsv is required.
struct GroundTruth {
  std::map<std::string, std::string> table_top_type;
  std::map<std::string, std::string> table_specific_type;
  std::set<Edge> gt_edges;
  std::map<ColumnId, std::string> attribute_labels;
  std::set<std::pair<std::string, std::string>> gt_relationships;
};

GroundTruth load_ground_truth(const std::filesystem::path& dir);

// Pair-counting Rand Index. Throws InputError when the item sets differ or
// fewer than two items are given.
double rand_index(const std::map<std::string, std::string>& predicted,
                  const std::map<std::string, std::string>& truth);

struct PurityResult {
  double value = 0.0;
  std::size_t clusters_used = 0;
  std::vector<std::string> empty_clusters;  // excluded from the mean
};

// Majority-label fraction per cluster, averaged over clusters (or weighted by
// cluster size). Unlabeled members are ignored; clusters left empty are
// excluded and reported.
PurityResult purity(const std::map<std::string, std::vector<std::string>>& cluster_labels,
                    bool weighted = false);

PurityResult purity_tables(const std::map<std::string, std::set<std::string>>& clusters,
                           const std::map<std::string, std::string>& table_top_type,
                           bool weighted = false);

// One cluster per attribute group, labelled through the column annotations.
PurityResult purity_attributes(const std::map<std::string, std::set<ColumnId>>& groups,
                               const std::map<ColumnId, std::string>& labels,
                               bool weighted = false);

struct TypeMatch {
  std::optional<std::string> gt_type;
  bool tie = false;
};

// Most frequent annotation over the type's datasets (specific, falling back
// to top-level); ties go to the lexicographically smallest label. Thing maps
// to Thing.
TypeMatch match_type_to_gt(const std::string& type, const GlobalHierarchy& hierarchy,
                           const GroundTruth& gt);

// Strict ancestor relation of the GT hierarchy (or its direct edges).
class GtPaths {
 public:
  GtPaths(const std::set<Edge>& edges, bool reachability);
  bool connects(const std::string& from, const std::string& to) const;

 private:
  std::set<Edge> relation_;
};

// Longest subsequence of `seq` whose consecutive elements are connected.
std::size_t longest_gt_chain(const std::vector<std::string>& seq, const GtPaths& gt);

// Root-to-leaf paths of the hierarchy.
std::vector<std::vector<std::string>> complete_paths(const WeightedDag& dag);

struct PtcsOptions {
  bool reachability = true;  // false: consecutive elements need a direct GT edge
};

double ptcs(const GlobalHierarchy& hierarchy, const GroundTruth& gt,
            const PtcsOptions& options = {});

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
};

Prf prf_from_counts(std::size_t tp, std::size_t fp, std::size_t fn);

// Predicted relationships are mapped to GT pairs through `type_map`; the
// mapped pairs are compared as a set. Unmatched endpoints are false positives.
Prf relationship_prf(const std::vector<Relationship>& predicted,
                     const std::set<std::pair<std::string, std::string>>& truth,
                     const std::map<std::string, std::optional<std::string>>& type_map);

std::size_t count_types(const WeightedDag& dag);

struct MetricsReport {
  double rand_index = 0.0;
  double purity_tables = 0.0;
  double purity_attributes = 0.0;
  double ptcs = 0.0;
  std::size_t t_count = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  nlohmann::json details = nlohmann::json::object();

  nlohmann::json to_json() const;
};

struct EvalOptions {
  bool weighted_purity = false;
  bool ptcs_reachability = true;
};

// Throws InputError listing schema dataset ids missing from the GT.
MetricsReport evaluate(const ConceptualSchema& schema, const GroundTruth& gt,
                       const EvalOptions& options = {});

// Mean of each metric over several reports.
MetricsReport aggregate(const std::vector<MetricsReport>& reports);

std::string format_metrics(const MetricsReport& report);

}  // namespace tabschema

#endif  // TABSCHEMA_EVAL_H_
