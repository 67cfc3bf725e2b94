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

#include "cli.h"

#include <CLI11.hpp>

#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "tabschema/errors.h"
#include "tabschema/eval.h"
#include "tabschema/pipeline.h"
#include "tabschema/schema.h"

namespace tabschema::cli {
namespace fs = std::filesystem;
namespace {

void write_file(const fs::path& path, const std::string& body) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path.string());
  out << body;
}

std::string utc_now() {
  std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

nlohmann::json paths_json(const std::vector<TypePath>& paths) {
  std::map<std::string, std::vector<std::string>> by_dataset;
  for (const auto& p : paths) {
    std::string line;
    for (const auto& t : p.types) line += (line.empty() ? "" : " -> ") + t;
    by_dataset[p.source_dataset].push_back(line);
  }
  return by_dataset;
}

// Flag values; applied over the config file only when given.
struct InferFlags {
  std::string config_path;
  std::string input_dir, out_dir, mode, provider, transcript, cache, base_url, model, record;
  std::string stage, judge, sample_strategy, exemplars, abstract_types;
  int n_max = 0, top_k = 0, repeat = 0, retry_budget = 0;
  double theta = 0, temperature = 0;
  std::uint64_t seed = 0;
  std::size_t sample_rows = 0;
  bool dump_intermediate = false;
};

int infer_once(const RunConfig& config, const fs::path& out_dir, std::ostream& out,
               std::ostream& err) {
  RunReport report;
  const std::string started = utc_now();
  auto partial = [&](const std::string& error) {
    nlohmann::json j{{"error", error}, {"report", report.to_json()}, {"started_at", started}};
    write_file(out_dir / "partial_state.json", j.dump(2) + "\n");
  };
  try {
    auto gateway = make_gateway(config);
    InferResult result;
    try {
      result = run_infer(config, *gateway, report);
    } catch (...) {
      if (gateway->recorder()) gateway->recorder()->save(config.provider.record_path);
      throw;
    }
    if (gateway->recorder()) gateway->recorder()->save(config.provider.record_path);

    write_file(out_dir / "schema.json", serialize_schema(result.schema));
    write_file(out_dir / "schema.dot", export_dot(result.schema));
    auto stats = gateway->stats();
    nlohmann::json rep = report.to_json();
    rep["gateway"] = {{"requests", stats.requests},
                      {"cache_hits", stats.cache_hits},
                      {"provider_calls", stats.provider_calls},
                      {"retries", stats.retries}};
    rep["started_at"] = started;
    rep["finished_at"] = utc_now();
    write_file(out_dir / "report.json", rep.dump(2) + "\n");
    if (config.dump_intermediate) {
      write_file(out_dir / "stage1_paths.json", paths_json(result.paths).dump(2) + "\n");
    }
    out << "wrote " << (out_dir / "schema.json").string() << " ("
        << result.schema.hierarchy.dag.nodes().size() - 1 << " types, "
        << report.skipped().size() << " tables skipped)\n";
    return kOk;
  } catch (const ReplayMissError& e) {
    partial(e.what());
    err << "replay miss: " << e.what() << "\n";
    return kReplayMiss;
  } catch (const TransportError& e) {
    partial(e.what());
    err << "provider error: " << e.what() << "\n";
    return kTransportError;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  }
}

int cmd_infer(const InferFlags& f, const CLI::App& sub, std::ostream& out, std::ostream& err) {
  RunConfig config;
  try {
    if (!f.config_path.empty()) config = load_config_file(f.config_path);
    nlohmann::json overrides = nlohmann::json::object();
    auto given = [&sub](const char* name) { return sub.get_option(name)->count() > 0; };
    if (given("--input-dir")) overrides["input_dir"] = f.input_dir;
    if (given("--out")) overrides["out_dir"] = f.out_dir;
    if (given("--mode")) overrides["mode"] = f.mode;
    if (given("--provider")) overrides["provider"] = f.provider;
    if (given("--transcript")) overrides["transcript_path"] = f.transcript;
    if (given("--cache")) overrides["cache_path"] = f.cache;
    if (given("--base-url")) overrides["base_url"] = f.base_url;
    if (given("--model")) overrides["model"] = f.model;
    if (given("--record")) overrides["record_path"] = f.record;
    if (given("--stage")) overrides["stage"] = f.stage;
    if (given("--judge")) overrides["judge"] = f.judge == "on";
    if (given("--sample-strategy")) overrides["sample_strategy"] = f.sample_strategy;
    if (given("--exemplars")) overrides["exemplars_path"] = f.exemplars;
    if (given("--abstract-types")) overrides["abstract_types_path"] = f.abstract_types;
    if (given("--n-max")) overrides["n_max"] = f.n_max;
    if (given("--top-k")) overrides["top_k"] = f.top_k;
    if (given("--repeat")) overrides["repeat"] = f.repeat;
    if (given("--retry-budget")) overrides["retry_budget"] = f.retry_budget;
    if (given("--theta")) overrides["theta"] = f.theta;
    if (given("--temperature")) overrides["temperature"] = f.temperature;
    if (given("--seed")) overrides["seed"] = f.seed;
    if (given("--sample-rows")) overrides["sample_rows"] = f.sample_rows;
    if (given("--dump-intermediate")) overrides["dump_intermediate"] = f.dump_intermediate;
    apply_config_json(config, overrides);
    if (config.input_dir.empty()) throw InputError("--input-dir is required");
    validate(config);
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  }

  if (config.repeat == 1) return infer_once(config, config.out_dir, out, err);
  int worst = kOk;
  for (int i = 0; i < config.repeat; ++i) {
    RunConfig run = config;
    run.seed = config.seed + static_cast<std::uint64_t>(i);
    if (!config.provider.record_path.empty()) {
      run.provider.record_path = config.provider.record_path + "." + std::to_string(i + 1);
    }
    int rc = infer_once(run, fs::path(config.out_dir) / ("run_" + std::to_string(i + 1)), out, err);
    if (rc != kOk) worst = rc;
  }
  return worst;
}

int cmd_eval(const std::vector<std::string>& schemas, const std::string& gt_dir,
             const std::string& out_path, bool weighted, bool direct, std::ostream& out,
             std::ostream& err) {
  try {
    GroundTruth gt = load_ground_truth(gt_dir);
    EvalOptions opts{weighted, !direct};
    std::vector<MetricsReport> reports;
    for (const auto& s : schemas) reports.push_back(evaluate(load_schema(s), gt, opts));
    MetricsReport report = reports.size() == 1 ? reports.front() : aggregate(reports);
    out << format_metrics(report);
    if (!out_path.empty()) write_file(out_path, report.to_json().dump(2) + "\n");
    return kOk;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  }
}

int cmd_export(const std::string& schema_path, const std::string& format,
               const std::string& out_path, std::ostream& out, std::ostream& err) {
  try {
    ConceptualSchema schema = load_schema(schema_path);
    std::string body = format == "dot" ? export_dot(schema) : export_summary(schema);
    if (out_path.empty()) {
      out << body;
    } else {
      write_file(out_path, body);
    }
    return kOk;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  }
}

int cmd_cache(const std::string& action, const std::string& path, std::ostream& out,
              std::ostream& err) {
  if (!fs::exists(path)) {
    out << (action == "clear" ? "removed 0 entries\n" : "0 entries\n");
    return kOk;
  }
  ResponseCache cache{fs::path(path)};
  if (action == "clear") {
    std::size_t n = cache.size();
    cache.clear();
    out << "removed " << n << " entries\n";
    return kOk;
  }
  out << cache.size() << " entries\n";
  for (const auto& [tmpl, n] : cache.counts_by_template()) out << "  " << tmpl << ": " << n << "\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Conceptual schema inference over tabular repositories", "tabschema"};
  app.require_subcommand(1);

  InferFlags f;
  auto* infer = app.add_subcommand("infer", "Infer a conceptual schema");
  infer->add_option("--config", f.config_path, "JSON config file; flags override it");
  infer->add_option("--input-dir", f.input_dir, "Directory of .csv/.tsv tables");
  infer->add_option("--out", f.out_dir, "Output directory");
  infer->add_option("--mode", f.mode, "Prompt constraint: ORI, ABS, SLC, FET, FULL");
  infer->add_option("--n-max", f.n_max, "Maximum path depth below Thing");
  infer->add_option("--theta", f.theta, "Attribute promotion threshold");
  infer->add_option("--top-k", f.top_k, "Top-level types explored per attribute");
  infer->add_option("--seed", f.seed, "Sampling seed");
  infer->add_option("--sample-seed", f.seed, "Alias of --seed");
  infer->add_option("--sample-rows", f.sample_rows, "Rows shown per table");
  infer->add_option("--sample-strategy", f.sample_strategy, "head or random")
      ->check(CLI::IsMember({"head", "random"}));
  infer->add_option("--repeat", f.repeat, "Independent runs with seeds seed..seed+n-1");
  infer->add_option("--retry-budget", f.retry_budget, "Re-prompts per malformed completion");
  infer->add_option("--stage", f.stage, "Last stage to run: s1, s2, s3")
      ->check(CLI::IsMember({"s1", "s2", "s3"}));
  infer->add_option("--provider", f.provider, "http or replay");
  infer->add_option("--transcript", f.transcript, "Replay transcript");
  infer->add_option("--record", f.record, "Write every response to this transcript");
  infer->add_option("--cache", f.cache, "Response cache file");
  infer->add_option("--base-url", f.base_url, "Chat-completion base URL");
  infer->add_option("--model", f.model, "Model name");
  infer->add_option("--temperature", f.temperature, "Sampling temperature");
  infer->add_option("--judge", f.judge, "LLM is-a judge pruning: on or off")
      ->check(CLI::IsMember({"on", "off"}));
  infer->add_option("--exemplars", f.exemplars, "Few-shot exemplar JSON");
  infer->add_option("--abstract-types", f.abstract_types, "ABS blacklist file");
  infer->add_flag("--dump-intermediate", f.dump_intermediate, "Write per-table paths");

  std::vector<std::string> schemas;
  std::string gt_dir, metrics_out;
  bool weighted = false, direct = false, aggregate_flag = false;
  auto* eval = app.add_subcommand("eval", "Score a schema against ground truth");
  eval->add_option("--schema", schemas, "Schema file(s)")->required();
  eval->add_option("--gt-dir", gt_dir, "Ground-truth directory")->required();
  eval->add_option("--out", metrics_out, "Write the metrics JSON here");
  eval->add_flag("--weighted", weighted, "Table-weighted purity");
  eval->add_flag("--ptcs-direct", direct, "PTCS with direct GT edges only");
  eval->add_flag("--aggregate", aggregate_flag, "Average over several schema files");

  std::string export_schema, format = "dot", export_out;
  auto* exp = app.add_subcommand("export", "Render a schema file");
  exp->add_option("--schema", export_schema, "Schema file")->required();
  exp->add_option("--format", format, "dot or summary");
  exp->add_option("--out", export_out, "Output file (stdout if omitted)");

  std::string cache_action = "inspect", cache_path;
  auto* cache = app.add_subcommand("cache", "Inspect or clear a response cache");
  cache->add_option("action", cache_action, "inspect or clear")
      ->check(CLI::IsMember({"inspect", "clear"}));
  cache->add_option("--cache", cache_path, "Cache file")->required();

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e, out, err);
    return rc == 0 ? kOk : kInputError;
  }

  if (*infer) return cmd_infer(f, *infer, out, err);
  if (*eval) {
    if (schemas.size() > 1 && !aggregate_flag) {
      err << "input error: several schemas need --aggregate\n";
      return kInputError;
    }
    return cmd_eval(schemas, gt_dir, metrics_out, weighted, direct, out, err);
  }
  if (*exp) {
    if (format != "dot" && format != "summary") {
      err << "usage error: unknown format '" << format << "' (dot, summary)\n";
      return kInputError;
    }
    return cmd_export(export_schema, format, export_out, out, err);
  }
  return cmd_cache(cache_action, cache_path, out, err);
}

}  // namespace tabschema::cli
