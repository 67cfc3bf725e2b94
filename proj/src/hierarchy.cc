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

#include "tabschema/hierarchy.h"

#include <algorithm>
#include <cctype>
#include <deque>
#include <optional>

#include "tabschema/errors.h"
#include "tabschema/text.h"

namespace tabschema {

// --- WeightedDag ---------------------------------------------------------

void WeightedDag::add_edge(const std::string& parent, const std::string& child, long weight) {
  nodes_.insert(parent);
  nodes_.insert(child);
  edges_[{parent, child}] += weight;
}

void WeightedDag::remove_edge(const std::string& parent, const std::string& child) {
  edges_.erase({parent, child});
}

bool WeightedDag::has_edge(const std::string& parent, const std::string& child) const {
  return edges_.count({parent, child}) > 0;
}

long WeightedDag::weight(const std::string& parent, const std::string& child) const {
  auto it = edges_.find({parent, child});
  return it == edges_.end() ? 0 : it->second;
}

std::vector<std::string> WeightedDag::children(const std::string& node) const {
  std::vector<std::string> out;
  for (auto it = edges_.lower_bound({node, std::string()});
       it != edges_.end() && it->first.first == node; ++it) {
    out.push_back(it->first.second);
  }
  return out;
}

std::vector<std::string> WeightedDag::parents(const std::string& node) const {
  std::vector<std::string> out;
  for (const auto& [e, _] : edges_) {
    if (e.second == node) out.push_back(e.first);
  }
  return out;
}

std::set<std::string> WeightedDag::reachable_from(const std::string& from) const {
  std::set<std::string> seen;
  if (!has_node(from)) return seen;
  std::deque<std::string> queue{from};
  seen.insert(from);
  while (!queue.empty()) {
    std::string u = std::move(queue.front());
    queue.pop_front();
    for (auto& v : children(u)) {
      if (seen.insert(v).second) queue.push_back(std::move(v));
    }
  }
  return seen;
}

std::set<std::string> WeightedDag::ancestors_or_self(const std::string& node) const {
  std::map<std::string, std::vector<std::string>> up;
  for (const auto& [e, _] : edges_) up[e.second].push_back(e.first);
  std::set<std::string> seen{node};
  std::deque<std::string> queue{node};
  while (!queue.empty()) {
    std::string u = std::move(queue.front());
    queue.pop_front();
    for (const auto& p : up[u]) {
      if (seen.insert(p).second) queue.push_back(p);
    }
  }
  return seen;
}

bool WeightedDag::is_acyclic() const {
  return bottom_up_order().size() == nodes_.size();
}

std::vector<std::string> WeightedDag::bottom_up_order() const {
  std::map<std::string, int> out_degree;
  std::map<std::string, std::vector<std::string>> up;
  for (const auto& n : nodes_) out_degree[n] = 0;
  for (const auto& [e, _] : edges_) {
    ++out_degree[e.first];
    up[e.second].push_back(e.first);
  }
  std::set<std::string> ready;
  for (const auto& [n, d] : out_degree) {
    if (d == 0) ready.insert(n);
  }
  std::vector<std::string> order;
  while (!ready.empty()) {
    std::string n = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(n);
    for (const auto& p : up[n]) {
      if (--out_degree[p] == 0) ready.insert(p);
    }
  }
  return order;
}

// --- Parsing -------------------------------------------------------------

std::string normalize_type_name(std::string_view name) {
  return text::collapse_whitespace(name);
}

namespace {

constexpr std::string_view kUnicodeArrow = "\xE2\x86\x92";  // U+2192

bool is_word_char(char c) {
  auto u = static_cast<unsigned char>(c);
  return u >= 0x80 || std::isalnum(u) || c == '_';
}
bool is_word_start(char c) {
  auto u = static_cast<unsigned char>(c);
  return u >= 0x80 || std::isalpha(u);
}

// Longest leading type name in `token`: words of [A-Za-z0-9_], the first
// starting with a letter and any further word starting with an uppercase
// letter ("Sports Team"). Sets `clean` when nothing but whitespace follows.
std::string leading_type_name(std::string_view token, bool& clean) {
  std::string t = text::collapse_whitespace(token);
  std::size_t i = 0;
  std::size_t end = 0;
  if (t.empty() || !is_word_start(t[0])) {
    clean = false;
    return {};
  }
  while (i < t.size()) {
    std::size_t j = i;
    while (j < t.size() && is_word_char(t[j])) ++j;
    if (j == i) break;
    end = j;
    if (j + 1 < t.size() && t[j] == ' ' &&
        std::isupper(static_cast<unsigned char>(t[j + 1]))) {
      i = j + 1;
      continue;
    }
    i = j;
    break;
  }
  clean = end == t.size();
  return t.substr(0, end);
}

std::vector<std::string> split_arrows(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  for (std::size_t i = 0; i < line.size();) {
    if (line.substr(i, kUnicodeArrow.size()) == kUnicodeArrow) {
      out.push_back(std::move(cur));
      cur.clear();
      i += kUnicodeArrow.size();
    } else if (line.substr(i, 2) == "->") {
      out.push_back(std::move(cur));
      cur.clear();
      i += 2;
    } else {
      cur.push_back(line[i++]);
    }
  }
  out.push_back(std::move(cur));
  return out;
}

// One line -> the longest well-formed path prefix, or nullopt.
std::optional<std::vector<std::string>> parse_path_line(std::string_view raw_line) {
  std::string line = text::strip_decorations(text::strip_list_marker(raw_line));
  auto tokens = split_arrows(line);
  std::vector<std::string> types;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    bool clean = false;
    std::string name = leading_type_name(tokens[i], clean);
    if (i == 0) {
      if (!text::starts_with_ci(name, kRootType) || name.size() != kRootType.size()) {
        return std::nullopt;
      }
      name = std::string(kRootType);
    }
    if (name.empty()) break;
    if (std::find(types.begin(), types.end(), name) != types.end()) return std::nullopt;
    types.push_back(std::move(name));
    if (!clean) break;
  }
  if (types.size() < 2) return std::nullopt;
  return types;
}

}  // namespace

std::vector<TypePath> parse_type_paths(std::string_view raw, int n_max,
                                       std::string_view dataset_id) {
  std::set<std::vector<std::string>> seen;
  std::vector<TypePath> paths;
  std::optional<std::size_t> too_deep;
  for (const auto& line : text::split_lines(raw)) {
    auto types = parse_path_line(line);
    if (!types) continue;
    if (static_cast<int>(types->size()) - 1 > n_max) {
      too_deep = types->size() - 1;
      continue;
    }
    if (seen.insert(*types).second) {
      paths.push_back(TypePath{std::move(*types), std::string(dataset_id)});
    }
  }
  if (too_deep) {
    throw DepthError("path depth " + std::to_string(*too_deep) + " exceeds maximum " +
                     std::to_string(n_max));
  }
  if (paths.empty()) throw ParseError("no well-formed type path in completion");
  std::sort(paths.begin(), paths.end());
  return paths;
}

std::vector<std::string> parse_type_list_answer(std::string_view raw) {
  std::vector<std::string> out;
  for (const auto& line : text::split_lines(raw)) {
    for (const auto& piece : text::split(line, ',')) {
      bool clean = false;
      std::string name = leading_type_name(text::strip_list_marker(piece), clean);
      if (name.empty() || name == kRootType) continue;
      if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
    }
  }
  return out;
}

// --- Per-table inference -------------------------------------------------

namespace {

std::optional<std::vector<std::string>> infer_fet_types(const RowSample& sample,
                                                        const HierarchyOptions& options,
                                                        Gateway& gateway, RunReport& report) {
  const auto& shots = gateway.exemplars().shots(TemplateId::kHierarchyFetStage1);
  for (int attempt = 0; attempt <= options.retry_budget; ++attempt) {
    PromptRequest req = render_fet_stage1_prompt(sample, shots);
    req.attempt = attempt;
    auto types = parse_type_list_answer(gateway.complete(req).text);
    if (!types.empty()) return types;
    report.flag("hierarchy", "fet_reprompt", sample.dataset_id,
                "attempt " + std::to_string(attempt) + ": no type names");
  }
  return std::nullopt;
}

}  // namespace

std::vector<TypePath> infer_table_hierarchy(const Dataset& dataset,
                                            const HierarchyOptions& options,
                                            Gateway& gateway, RunReport& report) {
  if (dataset.columns.empty()) {
    report.skip(dataset.id, "empty dataset");
    return {};
  }
  RowSample sample =
      sample_rows(dataset, options.sample_rows, options.seed, options.sample_strategy);

  HierarchyPromptOptions prompt;
  prompt.mode = options.mode;
  prompt.n_max = options.n_max;
  if (options.mode == PromptMode::kAbs) {
    prompt.abstract_blacklist = options.abstract_blacklist.empty()
                                    ? default_abstract_types()
                                    : options.abstract_blacklist;
  }
  if (needs_fet_types(options.mode)) {
    prompt.fet_types = infer_fet_types(sample, options, gateway, report);
    if (!prompt.fet_types) {
      report.skip(dataset.id, "most-specific type prompt unparseable after " +
                                  std::to_string(options.retry_budget + 1) + " attempts");
      return {};
    }
  }

  const auto& shots = gateway.exemplars().shots(TemplateId::kHierarchy);
  std::string last_error;
  for (int attempt = 0; attempt <= options.retry_budget; ++attempt) {
    PromptRequest req = render_hierarchy_prompt(sample, prompt, shots);
    req.attempt = attempt;
    std::string completion = gateway.complete(req).text;
    try {
      auto paths = parse_type_paths(completion, options.n_max, dataset.id);
      report.count("hierarchy.parsed_tables");
      return paths;
    } catch (const ParseError& e) {
      last_error = e.what();
      report.flag("hierarchy", "reprompt", dataset.id,
                  "attempt " + std::to_string(attempt) + ": " + last_error);
    }
  }
  report.skip(dataset.id, "hierarchy unparseable after " +
                              std::to_string(options.retry_budget + 1) +
                              " attempts: " + last_error);
  return {};
}

// --- Merge / prune / repair ----------------------------------------------

WeightedDag merge_hierarchies(const std::vector<TypePath>& paths) {
  WeightedDag dag;
  dag.add_node(std::string(kRootType));
  for (const auto& p : paths) {
    for (const auto& t : p.types) dag.add_node(t);
    for (std::size_t i = 0; i + 1 < p.types.size(); ++i) {
      dag.add_edge(p.types[i], p.types[i + 1]);
    }
  }
  return dag;
}

namespace {

std::string edge_name(const Edge& e) { return e.first + " -> " + e.second; }

// nullopt when the answer is unparseable.
std::optional<bool> judge_edge(const Edge& e, Gateway& gateway, RunReport& report) {
  PromptRequest req = render_isa_check_prompt(e.first, e.second);
  report.count("prune.judged");
  std::string answer = gateway.complete(req).text;
  try {
    return parse_yes_no(answer);
  } catch (const ParseError&) {
    report.count("prune.judge_unparseable");
    report.flag("prune", "judge_unparseable", edge_name(e), answer.substr(0, 80));
    return std::nullopt;
  }
}

}  // namespace

WeightedDag prune(WeightedDag dag, Gateway* gateway, bool judge, RunReport& report) {
  if (judge && gateway == nullptr) throw PreconditionError("judge pruning needs a gateway");

  // 1. self-loops
  std::vector<Edge> loops;
  for (const auto& [e, _] : dag.edges()) {
    if (e.first == e.second) loops.push_back(e);
  }
  for (const auto& e : loops) {
    dag.remove_edge(e.first, e.second);
    report.count("prune.self_loops");
  }

  // 2. inverse edges, each unordered pair visited once from its smaller end
  std::vector<Edge> pairs;
  for (const auto& [e, _] : dag.edges()) {
    if (e.first < e.second && dag.has_edge(e.second, e.first)) pairs.push_back(e);
  }
  for (const auto& [u, v] : pairs) {
    long forward = dag.weight(u, v);
    long backward = dag.weight(v, u);
    report.count("prune.inverse_pairs");
    if (forward != backward) {
      Edge loser = forward < backward ? Edge{u, v} : Edge{v, u};
      dag.remove_edge(loser.first, loser.second);
      report.flag("prune", "inverse_removed", edge_name(loser),
                  "weight " + std::to_string(std::min(forward, backward)) + " < " +
                      std::to_string(std::max(forward, backward)));
      continue;
    }
    bool keep_uv = true;
    bool keep_vu = true;
    if (judge) {
      keep_uv = judge_edge({u, v}, *gateway, report).value_or(true);
      keep_vu = judge_edge({v, u}, *gateway, report).value_or(true);
    }
    if (!keep_uv) dag.remove_edge(u, v);
    if (!keep_vu) dag.remove_edge(v, u);
    if (keep_uv && keep_vu) {
      // u < v, so (v, u) has the lexicographically larger source.
      dag.remove_edge(v, u);
      report.flag("prune", "tie_break", edge_name({v, u}),
                  "equal weight " + std::to_string(forward) + "; kept " + edge_name({u, v}));
    }
  }

  // 3. LLM judge on every remaining edge
  if (judge) {
    std::vector<Edge> remaining;
    for (const auto& [e, _] : dag.edges()) remaining.push_back(e);
    std::vector<std::optional<bool>> verdicts(remaining.size());
    parallel_for(remaining.size(), gateway->options().max_in_flight, [&](std::size_t i) {
      verdicts[i] = judge_edge(remaining[i], *gateway, report);
    });
    for (std::size_t i = 0; i < remaining.size(); ++i) {
      if (verdicts[i].has_value() && !*verdicts[i]) {
        dag.remove_edge(remaining[i].first, remaining[i].second);
        report.count("prune.judge_removed");
        report.flag("prune", "judge_removed", edge_name(remaining[i]));
      }
    }
  }
  return dag;
}

namespace {

// Some cycle's edges, found by a deterministic DFS; empty if acyclic.
std::vector<Edge> find_cycle(const WeightedDag& dag) {
  enum class Color { kWhite, kGray, kBlack };
  std::map<std::string, Color> color;
  for (const auto& n : dag.nodes()) color[n] = Color::kWhite;

  for (const auto& start : dag.nodes()) {
    if (color[start] != Color::kWhite) continue;
    // stack of (node, children, next child index)
    struct Frame {
      std::string node;
      std::vector<std::string> kids;
      std::size_t next = 0;
    };
    std::vector<Frame> stack;
    stack.push_back({start, dag.children(start)});
    color[start] = Color::kGray;
    while (!stack.empty()) {
      Frame& f = stack.back();
      if (f.next == f.kids.size()) {
        color[f.node] = Color::kBlack;
        stack.pop_back();
        continue;
      }
      std::string v = f.kids[f.next++];
      if (color[v] == Color::kGray) {
        std::vector<Edge> cycle;
        std::size_t i = stack.size();
        while (i-- > 0 && stack[i].node != v) {}
        for (std::size_t j = i; j + 1 < stack.size(); ++j) {
          cycle.push_back({stack[j].node, stack[j + 1].node});
        }
        cycle.push_back({stack.back().node, v});
        return cycle;
      }
      if (color[v] == Color::kWhite) {
        color[v] = Color::kGray;
        auto kids = dag.children(v);
        stack.push_back({v, std::move(kids)});
      }
    }
  }
  return {};
}

}  // namespace

GlobalHierarchy repair_and_root(WeightedDag dag, const std::vector<TypePath>& paths,
                                RunReport& report) {
  const std::string root(kRootType);
  dag.add_node(root);

  std::vector<Edge> invalid;
  for (const auto& [e, _] : dag.edges()) {
    if (e.first == e.second || e.second == root) invalid.push_back(e);
  }
  for (const auto& e : invalid) {
    dag.remove_edge(e.first, e.second);
    report.flag("repair", "invalid_edge_removed", edge_name(e));
  }

  for (;;) {
    auto cycle = find_cycle(dag);
    if (cycle.empty()) break;
    Edge victim = cycle.front();
    for (const auto& e : cycle) {
      long w = dag.weight(e.first, e.second);
      long best = dag.weight(victim.first, victim.second);
      if (w < best || (w == best && e < victim)) victim = e;
    }
    report.flag("repair", "cycle_broken", edge_name(victim),
                "cycle of length " + std::to_string(cycle.size()) + ", weight " +
                    std::to_string(dag.weight(victim.first, victim.second)));
    dag.remove_edge(victim.first, victim.second);
  }

  auto reachable = dag.reachable_from(root);
  for (const auto& n : dag.nodes()) {
    if (reachable.count(n) || !dag.parents(n).empty()) continue;
    dag.add_edge(root, n, 0);
    report.flag("repair", "orphan_reattached", n);
  }

  GlobalHierarchy h;
  h.dag = std::move(dag);
  for (const auto& p : paths) {
    const std::string& leaf = p.leaf();
    if (!h.dag.has_node(leaf)) continue;
    h.most_specific[p.source_dataset].insert(leaf);
    for (const auto& t : h.dag.ancestors_or_self(leaf)) {
      h.type_datasets[t].insert(p.source_dataset);
    }
  }
  return h;
}

std::set<std::string> top_level_types(const GlobalHierarchy& h) {
  auto kids = h.dag.children(std::string(kRootType));
  return {kids.begin(), kids.end()};
}

GlobalHierarchy build_hierarchy(const std::vector<Dataset>& datasets,
                                const HierarchyOptions& options, Gateway& gateway,
                                RunReport& report, std::vector<TypePath>* paths_out) {
  std::vector<std::vector<TypePath>> per_table(datasets.size());
  parallel_for(datasets.size(), gateway.options().max_in_flight, [&](std::size_t i) {
    per_table[i] = infer_table_hierarchy(datasets[i], options, gateway, report);
  });
  std::vector<TypePath> all;
  for (auto& ps : per_table) {
    for (auto& p : ps) all.push_back(std::move(p));
  }
  WeightedDag merged = merge_hierarchies(all);
  report.count("hierarchy.merged_edges", static_cast<long>(merged.edges().size()));
  WeightedDag pruned = prune(std::move(merged), &gateway, options.judge, report);
  auto h = repair_and_root(std::move(pruned), all, report);
  if (paths_out) *paths_out = std::move(all);
  return h;
}

}  // namespace tabschema
