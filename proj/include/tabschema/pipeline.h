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

#ifndef TABSCHEMA_PIPELINE_H_
#define TABSCHEMA_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tabschema/attributes.h"
#include "tabschema/gateway.h"
#include "tabschema/hierarchy.h"
#include "tabschema/relations.h"
#include "tabschema/run_report.h"
#include "tabschema/schema.h"

namespace tabschema {

enum class Stage { kHierarchy = 1, kAttributes = 2, kRelationships = 3 };

struct ProviderConfig {
  std::string provider = "replay";  // "http" or "replay"
  std::string base_url;
  std::string model = "default";
  std::string api_key_env = "OPENAI_API_KEY";
  double temperature = kDefaultTemperature;
  int max_retries = 3;
  int max_in_flight = 4;
  std::string cache_path;       // empty: in-memory cache
  std::string transcript_path;  // replay source
  std::string record_path;      // write every response here after the run
};

// Defaults: n_max=5, theta=0.9, five sampled values, temperature 0.1.
struct RunConfig {
  std::string input_dir;
  std::string out_dir = "out";
  ProviderConfig provider;
  PromptMode mode = PromptMode::kOri;
  int n_max = 5;
  int retry_budget = 3;
  bool judge = true;
  double theta = 0.9;
  std::size_t resolution_batch_size = 60;
  int top_k = 1;
  std::size_t ne_sample_k = 5;
  std::size_t value_sample_k = 5;
  std::size_t sample_rows = 5;
  SampleStrategy sample_strategy = SampleStrategy::kHead;
  std::uint64_t seed = 0;
  int repeat = 1;
  Stage stage = Stage::kRelationships;
  bool promote_to_root = false;
  bool dump_intermediate = false;
  std::string exemplars_path;       // empty: built-in exemplars
  std::string abstract_types_path;  // empty: built-in blacklist
};

// Throws InputError for out-of-range values.
void validate(const RunConfig& config);

// Config file keys mirror the RunConfig / ProviderConfig field names.
// Unknown keys are rejected.
void apply_config_json(RunConfig& config, const nlohmann::json& j);
RunConfig load_config_file(const std::filesystem::path& path);

// Fields that influence results; output and cache locations are excluded.
nlohmann::json config_fingerprint(const RunConfig& config);

std::shared_ptr<Gateway> make_gateway(const RunConfig& config);

struct InferResult {
  ConceptualSchema schema;
  std::vector<TypePath> paths;
};

// S1 hierarchy, S2 attributes, S3 relationships, gated by config.stage.
// `report` keeps whatever was recorded when a stage throws.
InferResult run_infer(const RunConfig& config, Gateway& gateway, RunReport& report);

}  // namespace tabschema

#endif  // TABSCHEMA_PIPELINE_H_
