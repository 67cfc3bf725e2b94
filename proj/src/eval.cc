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

#include "tabschema/eval.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "tabschema/errors.h"
#include "tabschema/text.h"

namespace tabschema {
namespace {

// Tab-separated rows with at least `min_fields` fields; '#' lines skipped.
std::vector<std::vector<std::string>> read_tsv(const std::filesystem::path& path,
                                               std::size_t min_fields, bool required) {
  std::ifstream in(path);
  if (!in) {
    if (required) throw InputError("cannot read " + path.string());
    return {};
  }
  std::vector<std::vector<std::string>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty() || text::trim(line)[0] == '#') continue;
    auto fields = text::split(line, '\t');
    for (auto& f : fields) f = text::collapse_whitespace(f);
    if (fields.size() < min_fields) {
      throw InputError(path.string() + ":" + std::to_string(lineno) + ": expected " +
                       std::to_string(min_fields) + " tab-separated fields");
    }
    rows.push_back(std::move(fields));
  }
  return rows;
}

double choose2(std::size_t n) { return static_cast<double>(n) * (static_cast<double>(n) - 1) / 2; }

}  // namespace

GroundTruth load_ground_truth(const std::filesystem::path& dir) {
  GroundTruth gt;
  for (const auto& r : read_tsv(dir / "tables.tsv", 2, true)) {
    gt.table_top_type[r[0]] = r[1];
    if (r.size() > 2 && !r[2].empty()) gt.table_specific_type[r[0]] = r[2];
  }
  for (const auto& r : read_tsv(dir / "hierarchy.tsv", 2, false)) gt.gt_edges.insert({r[0], r[1]});
  for (const auto& r : read_tsv(dir / "columns.tsv", 3, false)) {
    std::size_t index = 0;
    try {
      index = std::stoul(r[1]);
    } catch (const std::exception&) {
      throw InputError("columns.tsv: bad column index '" + r[1] + "'");
    }
    gt.attribute_labels[ColumnId{r[0], index}] = r[2];
  }
  for (const auto& r : read_tsv(dir / "relationships.tsv", 2, false)) {
    gt.gt_relationships.insert({r[0], r[1]});
  }
  return gt;
}

double rand_index(const std::map<std::string, std::string>& predicted,
                  const std::map<std::string, std::string>& truth) {
  if (predicted.size() != truth.size() ||
      !std::equal(predicted.begin(), predicted.end(), truth.begin(),
                  [](const auto& a, const auto& b) { return a.first == b.first; })) {
    throw InputError("rand index: predicted and ground-truth item sets differ");
  }
  if (predicted.size() < 2) throw InputError("rand index needs at least two items");

  std::map<std::pair<std::string, std::string>, std::size_t> joint;
  std::map<std::string, std::size_t> pred_sizes;
  std::map<std::string, std::size_t> true_sizes;
  for (const auto& [item, cluster] : predicted) {
    const std::string& label = truth.at(item);
    ++joint[{cluster, label}];
    ++pred_sizes[cluster];
    ++true_sizes[label];
  }
  double tp = 0;
  for (const auto& [_, n] : joint) tp += choose2(n);
  double same_pred = 0;
  for (const auto& [_, n] : pred_sizes) same_pred += choose2(n);
  double same_true = 0;
  for (const auto& [_, n] : true_sizes) same_true += choose2(n);
  double total = choose2(predicted.size());
  double fp = same_pred - tp;
  double fn = same_true - tp;
  double tn = total - tp - fp - fn;
  return (tp + tn) / total;
}

PurityResult purity(const std::map<std::string, std::vector<std::string>>& cluster_labels,
                    bool weighted) {
  PurityResult r;
  double sum = 0;
  double majority_total = 0;
  double member_total = 0;
  for (const auto& [cluster, labels] : cluster_labels) {
    if (labels.empty()) {
      r.empty_clusters.push_back(cluster);
      continue;
    }
    std::map<std::string, std::size_t> counts;
    for (const auto& l : labels) ++counts[l];
    std::size_t majority = 0;
    for (const auto& [_, c] : counts) majority = std::max(majority, c);
    sum += static_cast<double>(majority) / static_cast<double>(labels.size());
    majority_total += static_cast<double>(majority);
    member_total += static_cast<double>(labels.size());
    ++r.clusters_used;
  }
  if (r.clusters_used == 0) return r;
  r.value = weighted ? majority_total / member_total : sum / static_cast<double>(r.clusters_used);
  return r;
}

PurityResult purity_tables(const std::map<std::string, std::set<std::string>>& clusters,
                           const std::map<std::string, std::string>& table_top_type,
                           bool weighted) {
  std::map<std::string, std::vector<std::string>> labels;
  for (const auto& [cluster, members] : clusters) {
    auto& l = labels[cluster];
    for (const auto& m : members) {
      auto it = table_top_type.find(m);
      if (it != table_top_type.end()) l.push_back(it->second);
    }
  }
  return purity(labels, weighted);
}

PurityResult purity_attributes(const std::map<std::string, std::set<ColumnId>>& groups,
                               const std::map<ColumnId, std::string>& column_labels,
                               bool weighted) {
  std::map<std::string, std::vector<std::string>> labels;
  for (const auto& [group, members] : groups) {
    auto& l = labels[group];
    for (const auto& m : members) {
      auto it = column_labels.find(m);
      if (it != column_labels.end()) l.push_back(it->second);
    }
  }
  return purity(labels, weighted);
}

TypeMatch match_type_to_gt(const std::string& type, const GlobalHierarchy& hierarchy,
                           const GroundTruth& gt) {
  if (type == kRootType) return {std::string(kRootType), false};
  auto it = hierarchy.type_datasets.find(type);
  if (it == hierarchy.type_datasets.end()) return {};
  std::map<std::string, std::size_t> counts;
  for (const auto& d : it->second) {
    if (auto s = gt.table_specific_type.find(d); s != gt.table_specific_type.end()) {
      ++counts[s->second];
    } else if (auto t = gt.table_top_type.find(d); t != gt.table_top_type.end()) {
      ++counts[t->second];
    }
  }
  if (counts.empty()) return {};
  TypeMatch m;
  std::size_t best = 0;
  for (const auto& [label, c] : counts) {
    if (c > best) {
      best = c;
      m.gt_type = label;
      m.tie = false;
    } else if (c == best) {
      m.tie = true;  // map order keeps the lexicographically smaller label
    }
  }
  return m;
}

GtPaths::GtPaths(const std::set<Edge>& edges, bool reachability) {
  if (!reachability) {
    relation_ = edges;
    return;
  }
  WeightedDag g;
  for (const auto& [p, c] : edges) g.add_edge(p, c);
  for (const auto& n : g.nodes()) {
    for (const auto& d : g.reachable_from(n)) {
      if (d != n) relation_.insert({n, d});
    }
  }
}

bool GtPaths::connects(const std::string& from, const std::string& to) const {
  return relation_.count({from, to}) > 0;
}

std::size_t longest_gt_chain(const std::vector<std::string>& seq, const GtPaths& gt) {
  // best[i]: longest chain ending at seq[i]
  std::vector<std::size_t> best(seq.size(), 1);
  std::size_t longest = 0;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (gt.connects(seq[j], seq[i])) best[i] = std::max(best[i], best[j] + 1);
    }
    longest = std::max(longest, best[i]);
  }
  return longest;
}

std::vector<std::vector<std::string>> complete_paths(const WeightedDag& dag) {
  std::vector<std::vector<std::string>> out;
  const std::string root(kRootType);
  if (!dag.has_node(root)) return out;
  std::vector<std::string> current{root};
  std::function<void(const std::string&)> dfs = [&](const std::string& node) {
    auto kids = dag.children(node);
    if (kids.empty()) {
      if (current.size() > 1) out.push_back(current);
      return;
    }
    for (const auto& k : kids) {
      if (std::find(current.begin(), current.end(), k) != current.end()) continue;
      current.push_back(k);
      dfs(k);
      current.pop_back();
    }
  };
  dfs(root);
  return out;
}

double ptcs(const GlobalHierarchy& hierarchy, const GroundTruth& gt, const PtcsOptions& options) {
  GtPaths paths(gt.gt_edges, options.reachability);
  std::map<std::string, std::optional<std::string>> matched;
  auto match = [&](const std::string& t) -> const std::optional<std::string>& {
    auto it = matched.find(t);
    if (it == matched.end()) it = matched.emplace(t, match_type_to_gt(t, hierarchy, gt).gt_type).first;
    return it->second;
  };

  double sum = 0;
  std::size_t n = 0;
  for (const auto& p : complete_paths(hierarchy.dag)) {
    std::vector<std::string> mapped;
    for (const auto& t : p) {
      if (const auto& m = match(t)) mapped.push_back(*m);
    }
    if (mapped.empty()) continue;
    std::set<std::string> distinct(mapped.begin(), mapped.end());
    sum += static_cast<double>(longest_gt_chain(mapped, paths)) /
           static_cast<double>(distinct.size());
    ++n;
  }
  return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

Prf prf_from_counts(std::size_t tp, std::size_t fp, std::size_t fn) {
  Prf r;
  r.tp = tp;
  r.fp = fp;
  r.fn = fn;
  r.precision = tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
  r.recall = tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
  r.f1 = r.precision + r.recall == 0
             ? 0.0
             : 2 * r.precision * r.recall / (r.precision + r.recall);
  return r;
}

Prf relationship_prf(const std::vector<Relationship>& predicted,
                     const std::set<std::pair<std::string, std::string>>& truth,
                     const std::map<std::string, std::optional<std::string>>& type_map) {
  std::set<std::pair<std::string, std::string>> hits;
  std::set<std::pair<std::string, std::string>> misses;
  for (const auto& r : predicted) {
    auto s = type_map.find(r.source_type);
    auto t = type_map.find(r.target_type);
    bool mapped = s != type_map.end() && s->second && t != type_map.end() && t->second;
    if (mapped && truth.count({*s->second, *t->second})) {
      hits.insert({*s->second, *t->second});
    } else if (mapped) {
      misses.insert({*s->second, *t->second});
    } else {
      // keep unmatched predictions distinct from every GT pair
      misses.insert({"\x01" + r.source_type, "\x01" + r.target_type});
    }
  }
  return prf_from_counts(hits.size(), misses.size(), truth.size() - hits.size());
}

std::size_t count_types(const WeightedDag& dag) {
  return dag.nodes().size() - (dag.has_node(std::string(kRootType)) ? 1 : 0);
}

nlohmann::json MetricsReport::to_json() const {
  return nlohmann::json{{"rand_index", rand_index},     {"purity_tables", purity_tables},
                        {"purity_attributes", purity_attributes},
                        {"ptcs", ptcs},                 {"t_count", t_count},
                        {"precision", precision},       {"recall", recall},
                        {"f1", f1},                     {"details", details}};
}

MetricsReport evaluate(const ConceptualSchema& schema, const GroundTruth& gt,
                       const EvalOptions& options) {
  const auto& h = schema.hierarchy;
  MetricsReport report;
  auto& details = report.details;

  std::set<std::string> tables;
  if (auto it = h.type_datasets.find(std::string(kRootType)); it != h.type_datasets.end()) {
    tables = it->second;
  }
  std::vector<std::string> unknown;
  for (const auto& d : tables) {
    if (!gt.table_top_type.count(d)) unknown.push_back(d);
  }
  if (!unknown.empty()) {
    std::string ids;
    for (const auto& u : unknown) ids += (ids.empty() ? "" : ", ") + u;
    throw InputError("schema datasets missing from ground truth: " + ids);
  }

  // Table clustering by top-level type. A table under several top-level
  // types is counted in the largest of them for the Rand Index.
  const auto tops = top_level_types(h);
  std::map<std::string, std::set<std::string>> clusters;
  for (const auto& t : tops) {
    auto it = h.type_datasets.find(t);
    clusters[t] = it == h.type_datasets.end() ? std::set<std::string>{} : it->second;
  }
  std::map<std::string, std::string> predicted;
  std::map<std::string, std::string> truth;
  for (const auto& d : tables) {
    std::string best;
    std::size_t best_size = 0;
    for (const auto& [t, members] : clusters) {
      if (members.count(d) && members.size() > best_size) {
        best = t;
        best_size = members.size();
      }
    }
    predicted[d] = best;
    truth[d] = gt.table_top_type.at(d);
  }
  details["tables_evaluated"] = tables.size();
  details["top_level_types"] = tops;
  if (tables.size() >= 2) {
    report.rand_index = rand_index(predicted, truth);
  } else {
    details["rand_index_note"] = "fewer than two tables";
  }

  auto pt = purity_tables(clusters, gt.table_top_type, options.weighted_purity);
  report.purity_tables = pt.value;
  details["purity_tables_empty_clusters"] = pt.empty_clusters;

  if (schema.attributes) {
    std::map<std::string, std::set<ColumnId>> groups;
    for (const auto& [type, atts] : *schema.attributes) {
      for (const auto& a : atts) {
        if (!a.inherited) groups[type + "/" + a.canonical_name] = a.dataset_columns;
      }
    }
    auto pa = purity_attributes(groups, gt.attribute_labels, options.weighted_purity);
    report.purity_attributes = pa.value;
    details["attribute_groups_evaluated"] = pa.clusters_used;
    details["attribute_groups_unlabeled"] = pa.empty_clusters.size();
  }

  report.ptcs = ptcs(h, gt, PtcsOptions{options.ptcs_reachability});
  details["complete_paths"] = complete_paths(h.dag).size();
  report.t_count = count_types(h.dag);

  std::map<std::string, std::optional<std::string>> type_map;
  std::vector<std::string> ties;
  for (const auto& t : h.dag.nodes()) {
    auto m = match_type_to_gt(t, h, gt);
    if (m.tie) ties.push_back(t);
    type_map[t] = m.gt_type;
  }
  details["match_ties"] = ties;

  std::vector<Relationship> rels = schema.relationships.value_or(std::vector<Relationship>{});
  Prf prf = relationship_prf(rels, gt.gt_relationships, type_map);
  report.precision = prf.precision;
  report.recall = prf.recall;
  report.f1 = prf.f1;
  details["relationships"] = {{"tp", prf.tp}, {"fp", prf.fp}, {"fn", prf.fn}};
  return report;
}

MetricsReport aggregate(const std::vector<MetricsReport>& reports) {
  MetricsReport m;
  if (reports.empty()) return m;
  double n = static_cast<double>(reports.size());
  double t_sum = 0;
  for (const auto& r : reports) {
    m.rand_index += r.rand_index / n;
    m.purity_tables += r.purity_tables / n;
    m.purity_attributes += r.purity_attributes / n;
    m.ptcs += r.ptcs / n;
    m.precision += r.precision / n;
    m.recall += r.recall / n;
    m.f1 += r.f1 / n;
    t_sum += static_cast<double>(r.t_count);
  }
  m.t_count = static_cast<std::size_t>(t_sum / n + 0.5);
  m.details["runs"] = reports.size();
  m.details["t_count_mean"] = t_sum / n;
  return m;
}

std::string format_metrics(const MetricsReport& r) {
  std::ostringstream out;
  char buf[64];
  auto line = [&](const char* name, double v) {
    std::snprintf(buf, sizeof(buf), "%-20s %.4f\n", name, v);
    out << buf;
  };
  line("RI", r.rand_index);
  line("Purity (tables)", r.purity_tables);
  line("Purity (attributes)", r.purity_attributes);
  line("PTCS", r.ptcs);
  std::snprintf(buf, sizeof(buf), "%-20s %zu\n", "T#", r.t_count);
  out << buf;
  line("Precision", r.precision);
  line("Recall", r.recall);
  line("F1", r.f1);
  return out.str();
}

}  // namespace tabschema
