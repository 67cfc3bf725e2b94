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

#include "tabschema/pipeline.h"

#include <fstream>
#include <sstream>

#include "tabschema/errors.h"
#include "tabschema/table_store.h"
#include "tabschema/text.h"

namespace tabschema {
namespace {

constexpr std::string_view kToolVersion = "tabschema 0.1.0";

std::string stage_name(Stage s) {
  return "s" + std::to_string(static_cast<int>(s));
}

std::string read_file(const std::filesystem::path& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(std::string("cannot read ") + what + " " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

void validate(const RunConfig& c) {
  auto require = [](bool ok, const std::string& msg) {
    if (!ok) throw InputError("invalid configuration: " + msg);
  };
  require(c.n_max >= 1 && c.n_max <= 20, "n_max must be in [1, 20]");
  require(c.retry_budget >= 0 && c.retry_budget <= 10, "retry_budget must be in [0, 10]");
  require(c.theta > 0.0 && c.theta <= 1.0, "theta must be in (0, 1]");
  require(c.top_k >= 1, "top_k must be >= 1");
  require(c.ne_sample_k >= 1, "ne_sample_k must be >= 1");
  require(c.value_sample_k >= 1, "value_sample_k must be >= 1");
  require(c.sample_rows >= 1, "sample_rows must be >= 1");
  require(c.resolution_batch_size >= 2, "resolution_batch_size must be >= 2");
  require(c.repeat >= 1, "repeat must be >= 1");
  const auto& p = c.provider;
  require(p.temperature >= 0.0 && p.temperature <= 2.0, "temperature must be in [0, 2]");
  require(p.max_retries >= 0, "max_retries must be >= 0");
  require(p.max_in_flight >= 1, "max_in_flight must be >= 1");
  require(p.provider == "http" || p.provider == "replay", "provider must be http or replay");
  require(p.provider != "http" || !p.base_url.empty(), "http provider needs base_url");
  require(p.provider != "replay" || !p.transcript_path.empty(),
          "replay provider needs transcript_path");
}

void apply_config_json(RunConfig& c, const nlohmann::json& j) {
  if (!j.is_object()) throw InputError("config must be a JSON object");
  try {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string& k = it.key();
      const auto& v = it.value();
      if (k == "input_dir") c.input_dir = v.get<std::string>();
      else if (k == "out_dir") c.out_dir = v.get<std::string>();
      else if (k == "provider") c.provider.provider = v.get<std::string>();
      else if (k == "base_url") c.provider.base_url = v.get<std::string>();
      else if (k == "model") c.provider.model = v.get<std::string>();
      else if (k == "api_key_env") c.provider.api_key_env = v.get<std::string>();
      else if (k == "temperature") c.provider.temperature = v.get<double>();
      else if (k == "max_retries") c.provider.max_retries = v.get<int>();
      else if (k == "max_in_flight") c.provider.max_in_flight = v.get<int>();
      else if (k == "cache_path") c.provider.cache_path = v.get<std::string>();
      else if (k == "transcript_path") c.provider.transcript_path = v.get<std::string>();
      else if (k == "record_path") c.provider.record_path = v.get<std::string>();
      else if (k == "mode") {
        auto m = mode_from_string(v.get<std::string>());
        if (!m) throw InputError("unknown mode " + v.get<std::string>());
        c.mode = *m;
      } else if (k == "n_max") c.n_max = v.get<int>();
      else if (k == "retry_budget") c.retry_budget = v.get<int>();
      else if (k == "judge") c.judge = v.get<bool>();
      else if (k == "theta") c.theta = v.get<double>();
      else if (k == "resolution_batch_size") c.resolution_batch_size = v.get<std::size_t>();
      else if (k == "top_k") c.top_k = v.get<int>();
      else if (k == "ne_sample_k") c.ne_sample_k = v.get<std::size_t>();
      else if (k == "value_sample_k") c.value_sample_k = v.get<std::size_t>();
      else if (k == "sample_rows") c.sample_rows = v.get<std::size_t>();
      else if (k == "sample_strategy") {
        auto s = v.get<std::string>();
        if (s != "head" && s != "random") throw InputError("sample_strategy must be head or random");
        c.sample_strategy = s == "head" ? SampleStrategy::kHead : SampleStrategy::kRandom;
      } else if (k == "seed") c.seed = v.get<std::uint64_t>();
      else if (k == "repeat") c.repeat = v.get<int>();
      else if (k == "stage") {
        auto s = v.get<std::string>();
        if (s == "s1") c.stage = Stage::kHierarchy;
        else if (s == "s2") c.stage = Stage::kAttributes;
        else if (s == "s3") c.stage = Stage::kRelationships;
        else throw InputError("stage must be s1, s2 or s3");
      } else if (k == "promote_to_root") c.promote_to_root = v.get<bool>();
      else if (k == "dump_intermediate") c.dump_intermediate = v.get<bool>();
      else if (k == "exemplars_path") c.exemplars_path = v.get<std::string>();
      else if (k == "abstract_types_path") c.abstract_types_path = v.get<std::string>();
      else throw InputError("unknown config key '" + k + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("config value has the wrong type: ") + e.what());
  }
}

RunConfig load_config_file(const std::filesystem::path& path) {
  auto j = nlohmann::json::parse(read_file(path, "config"), nullptr, false);
  if (j.is_discarded()) throw InputError("config is not valid JSON: " + path.string());
  RunConfig c;
  apply_config_json(c, j);
  return c;
}

nlohmann::json config_fingerprint(const RunConfig& c) {
  nlohmann::json j{
      {"provider", c.provider.provider},
      {"model", c.provider.model},
      {"temperature", c.provider.temperature},
      {"mode", to_string(c.mode)},
      {"n_max", c.n_max},
      {"retry_budget", c.retry_budget},
      {"judge", c.judge},
      {"theta", c.theta},
      {"resolution_batch_size", c.resolution_batch_size},
      {"top_k", c.top_k},
      {"ne_sample_k", c.ne_sample_k},
      {"value_sample_k", c.value_sample_k},
      {"sample_rows", c.sample_rows},
      {"sample_strategy", c.sample_strategy == SampleStrategy::kHead ? "head" : "random"},
      {"seed", c.seed},
      {"stage", stage_name(c.stage)},
      {"promote_to_root", c.promote_to_root},
  };
  if (!c.exemplars_path.empty()) {
    j["exemplars_sha256"] = text::sha256_hex(read_file(c.exemplars_path, "exemplars"));
  }
  if (!c.abstract_types_path.empty()) {
    j["abstract_types_sha256"] =
        text::sha256_hex(read_file(c.abstract_types_path, "abstract types"));
  }
  return j;
}

std::shared_ptr<Gateway> make_gateway(const RunConfig& config) {
  const auto& p = config.provider;
  std::shared_ptr<Provider> provider;
  if (p.provider == "http") {
    provider = std::make_shared<HttpProvider>(
        HttpProviderConfig{p.base_url, p.model, p.api_key_env, std::chrono::seconds(60)});
  } else {
    provider = std::make_shared<ReplayProvider>(
        std::make_shared<const Transcript>(Transcript::load(p.transcript_path)));
  }
  auto cache = p.cache_path.empty() ? std::make_shared<ResponseCache>()
                                    : std::make_shared<ResponseCache>(p.cache_path);
  GatewayOptions opts;
  opts.model = p.model;
  opts.temperature = p.temperature;
  opts.max_retries = p.max_retries;
  opts.max_in_flight = p.max_in_flight;
  auto gateway = std::make_shared<Gateway>(std::move(provider), std::move(cache), opts);
  if (!config.exemplars_path.empty()) {
    auto j = nlohmann::json::parse(read_file(config.exemplars_path, "exemplars"), nullptr, false);
    if (j.is_discarded()) throw InputError("exemplars file is not valid JSON");
    gateway->set_exemplars(std::make_shared<const Exemplars>(Exemplars::from_json(j)));
  }
  if (!p.record_path.empty()) gateway->set_recorder(std::make_shared<Transcript>());
  return gateway;
}

InferResult run_infer(const RunConfig& config, Gateway& gateway, RunReport& report) {
  validate(config);
  InferResult result;

  Repository repo = load_repository(config.input_dir);
  for (const auto& w : repo.warnings) {
    report.warn(w);
    report.flag("load", "file_skipped", w.substr(0, w.find(':')), w);
  }
  report.count("load.datasets", static_cast<long>(repo.datasets.size()));

  HierarchyOptions hopts;
  hopts.mode = config.mode;
  hopts.n_max = config.n_max;
  hopts.retry_budget = config.retry_budget;
  hopts.sample_rows = config.sample_rows;
  hopts.sample_strategy = config.sample_strategy;
  hopts.seed = config.seed;
  hopts.judge = config.judge;
  if (!config.abstract_types_path.empty()) {
    hopts.abstract_blacklist =
        parse_type_list(read_file(config.abstract_types_path, "abstract types"));
  }

  ConceptualSchema& schema = result.schema;
  schema.hierarchy = build_hierarchy(repo.datasets, hopts, gateway, report, &result.paths);

  if (config.stage >= Stage::kAttributes) {
    AttributeOptions aopts;
    aopts.theta = config.theta;
    aopts.value_sample_k = config.value_sample_k;
    aopts.seed = config.seed;
    aopts.retry_budget = config.retry_budget;
    aopts.resolution_batch_size = config.resolution_batch_size;
    aopts.promote_to_root = config.promote_to_root;
    schema.attributes =
        infer_attributes(schema.hierarchy, repo.datasets, aopts, gateway, report).attributes;
  }
  if (config.stage >= Stage::kRelationships) {
    RelationOptions ropts;
    ropts.top_k = config.top_k;
    ropts.ne_sample_k = config.ne_sample_k;
    ropts.seed = config.seed;
    ropts.retry_budget = config.retry_budget;
    schema.relationships = discover_all_relationships(schema.hierarchy, *schema.attributes,
                                                      repo.datasets, ropts, gateway, report);
  }

  auto fingerprint = config_fingerprint(config);
  schema.provenance = {
      {"tool", kToolVersion},
      {"config", fingerprint},
      {"config_hash", text::sha256_hex(fingerprint.dump())},
      {"provider_id", gateway.provider_id()},
      {"stage", stage_name(config.stage)},
      {"datasets_loaded", repo.datasets.size()},
      {"datasets_in_hierarchy", schema.hierarchy.most_specific.size()},
  };
  return result;
}

}  // namespace tabschema
