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

#include "oracles.h"

#include <algorithm>
#include <functional>

namespace tabschema::oracle {

double rand_index_pairs(const std::vector<int>& predicted, const std::vector<int>& truth) {
  std::size_t agree = 0, pairs = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    for (std::size_t j = i + 1; j < predicted.size(); ++j) {
      bool same_pred = predicted[i] == predicted[j];
      bool same_truth = truth[i] == truth[j];
      agree += same_pred == same_truth;
      ++pairs;
    }
  }
  return static_cast<double>(agree) / static_cast<double>(pairs);
}

std::set<std::pair<std::string, std::string>> closure(
    const std::set<std::pair<std::string, std::string>>& edges) {
  auto out = edges;
  for (bool grew = true; grew;) {
    grew = false;
    auto snapshot = out;
    for (const auto& [a, b] : snapshot) {
      for (const auto& [c, d] : snapshot) {
        if (b == c && out.insert({a, d}).second) grew = true;
      }
    }
  }
  return out;
}

double purity_recount(const std::vector<std::vector<std::string>>& clusters) {
  double total = 0;
  for (const auto& c : clusters) {
    std::size_t best = 0;
    for (const auto& label : c) {
      best = std::max<std::size_t>(best, std::count(c.begin(), c.end(), label));
    }
    total += static_cast<double>(best) / static_cast<double>(c.size());
  }
  return total / static_cast<double>(clusters.size());
}

long recount_edge(const std::vector<TypePath>& paths, const std::string& u,
                  const std::string& v) {
  long n = 0;
  for (const auto& p : paths) {
    for (std::size_t i = 1; i < p.types.size(); ++i) {
      if (p.types[i - 1] == u && p.types[i] == v) {
        ++n;
        break;
      }
    }
  }
  return n;
}

std::string partition_violation(const std::vector<AttributeGroup>& groups,
                                const std::set<std::string>& names) {
  std::map<std::string, int> seen;
  for (const auto& g : groups) {
    if (g.members.empty()) return "empty group " + g.canonical_name;
    for (const auto& m : g.members) {
      if (!names.count(m)) return "unknown member " + m;
      if (++seen[m] > 1) return "member in two groups: " + m;
    }
  }
  for (const auto& n : names) {
    if (!seen.count(n)) return "missing name " + n;
  }
  return {};
}

std::vector<TypePath> random_type_paths(std::mt19937_64& rng, std::size_t max_paths) {
  static const std::vector<std::string> kPool{"A", "B", "C", "D", "E", "F", "G", "H"};
  std::uniform_int_distribution<std::size_t> n_paths(1, max_paths);
  std::uniform_int_distribution<int> depth(1, 5);
  std::vector<TypePath> out;
  std::size_t n = n_paths(rng);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::string> shuffled = kPool;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    std::vector<std::string> t{std::string(kRootType)};
    int d = depth(rng);
    for (int k = 0; k < d; ++k) t.push_back(shuffled[k]);
    out.push_back(TypePath{std::move(t), "t" + std::to_string(i % 7)});
  }
  return out;
}

std::string hierarchy_violation(const WeightedDag& dag) {
  const std::string root(kRootType);
  for (const auto& [e, w] : dag.edges()) {
    if (e.first == e.second) return "self-loop on " + e.first;
    if (dag.has_edge(e.second, e.first)) return "2-cycle " + e.first + "/" + e.second;
    if (!dag.has_node(e.first) || !dag.has_node(e.second)) return "dangling edge";
  }
  // Cycle check by DFS colouring, independent of the library's Kahn order.
  std::map<std::string, int> colour;
  std::function<bool(const std::string&)> cyclic = [&](const std::string& u) {
    colour[u] = 1;
    for (const auto& [e, w] : dag.edges()) {
      if (e.first != u) continue;
      if (colour[e.second] == 1) return true;
      if (colour[e.second] == 0 && cyclic(e.second)) return true;
    }
    colour[u] = 2;
    return false;
  };
  for (const auto& n : dag.nodes()) {
    if (colour[n] == 0 && cyclic(n)) return "cycle through " + n;
  }
  if (!dag.has_node(root)) return "no root";
  std::set<std::string> seen{root};
  std::vector<std::string> stack{root};
  while (!stack.empty()) {
    std::string u = stack.back();
    stack.pop_back();
    for (const auto& [e, w] : dag.edges()) {
      if (e.first == u && seen.insert(e.second).second) stack.push_back(e.second);
    }
  }
  for (const auto& n : dag.nodes()) {
    if (!seen.count(n)) return "unreachable " + n;
  }
  return {};
}

}  // namespace tabschema::oracle
