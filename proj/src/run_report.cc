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

#include "tabschema/run_report.h"

#include <algorithm>

namespace tabschema {

void RunReport::skip(std::string dataset, std::string reason) {
  std::lock_guard lock(mu_);
  skipped_.push_back({std::move(dataset), std::move(reason)});
}

void RunReport::flag(std::string stage, std::string kind, std::string subject,
                     std::string detail) {
  std::lock_guard lock(mu_);
  flags_.push_back({std::move(stage), std::move(kind), std::move(subject), std::move(detail)});
}

void RunReport::warn(std::string message) {
  std::lock_guard lock(mu_);
  warnings_.push_back(std::move(message));
}

void RunReport::count(const std::string& counter, long delta) {
  std::lock_guard lock(mu_);
  counters_[counter] += delta;
}

std::vector<SkippedDataset> RunReport::skipped() const {
  std::lock_guard lock(mu_);
  auto out = skipped_;
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Flag> RunReport::flags() const {
  std::lock_guard lock(mu_);
  auto out = flags_;
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Flag> RunReport::flags(std::string_view kind) const {
  std::vector<Flag> out;
  for (auto& f : flags()) {
    if (f.kind == kind) out.push_back(f);
  }
  return out;
}

long RunReport::counter(const std::string& name) const {
  std::lock_guard lock(mu_);
  auto it = counters_.find(name);
  return it == counters_.end() ? 0 : it->second;
}

nlohmann::json RunReport::to_json() const {
  nlohmann::json j;
  j["skipped_datasets"] = nlohmann::json::array();
  for (const auto& s : skipped()) {
    j["skipped_datasets"].push_back({{"dataset", s.dataset}, {"reason", s.reason}});
  }
  j["flags"] = nlohmann::json::array();
  for (const auto& f : flags()) {
    j["flags"].push_back(
        {{"stage", f.stage}, {"kind", f.kind}, {"subject", f.subject}, {"detail", f.detail}});
  }
  std::lock_guard lock(mu_);
  auto warnings = warnings_;
  std::sort(warnings.begin(), warnings.end());
  j["warnings"] = warnings;
  j["counters"] = counters_;
  return j;
}

}  // namespace tabschema
