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

#ifndef TABSCHEMA_RUN_REPORT_H_
#define TABSCHEMA_RUN_REPORT_H_

#include <map>
#include <mutex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace tabschema {

// One repaired or otherwise noteworthy decision taken during a run.
struct Flag {
  std::string stage;     // "load", "hierarchy", "prune", "repair", ...
  std::string kind;      // e.g. "tie_break", "judge_unparseable"
  std::string subject;   // dataset id, edge, attribute, ...
  std::string detail;

  auto operator<=>(const Flag&) const = default;
};

struct SkippedDataset {
  std::string dataset;
  std::string reason;

  auto operator<=>(const SkippedDataset&) const = default;
};

// Thread-safe collector for everything a run skipped, repaired or counted.
class RunReport {
 public:
  void skip(std::string dataset, std::string reason);
  void flag(std::string stage, std::string kind, std::string subject, std::string detail = {});
  void warn(std::string message);
  void count(const std::string& counter, long delta = 1);

  std::vector<SkippedDataset> skipped() const;
  std::vector<Flag> flags() const;
  std::vector<Flag> flags(std::string_view kind) const;
  long counter(const std::string& name) const;

  // Sorted, so the document is independent of thread scheduling.
  nlohmann::json to_json() const;

 private:
  mutable std::mutex mu_;
  std::vector<SkippedDataset> skipped_;
  std::vector<Flag> flags_;
  std::vector<std::string> warnings_;
  std::map<std::string, long> counters_;
};

}  // namespace tabschema

#endif  // TABSCHEMA_RUN_REPORT_H_
