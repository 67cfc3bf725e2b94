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

#ifndef TABSCHEMA_GATEWAY_H_
#define TABSCHEMA_GATEWAY_H_

#include <atomic>
#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <string>
#include <vector>

#include "tabschema/prompts.h"

namespace tabschema {

struct LlmResponse {
  std::string text;
  bool cached = false;
  std::string provider_id;
};

// Content hash over (template id, rendered text, shots, temperature, model,
// attempt). Lowercase hex SHA-256.
std::string cache_key(const PromptRequest& request, std::string_view model);

class Provider {
 public:
  virtual ~Provider() = default;
  virtual std::string id() const = 0;
  // Throws TransportError on a retryable failure, ReplayMissError when a
  // replay source lacks the key.
  virtual std::string complete(const PromptRequest& request, const std::string& key) = 0;
};

// Recorded (key -> response) pairs. File format: one JSON object per line,
// {"key": ..., "template_id": ..., "response_text": ...}, sorted by key.
class Transcript {
 public:
  Transcript() = default;
  Transcript(Transcript&& other) noexcept : entries_(std::move(other.entries_)) {}

  static Transcript load(const std::filesystem::path& path);

  std::optional<std::string> find(const std::string& key) const;
  void put(const std::string& key, TemplateId id, const std::string& response);
  std::size_t size() const;
  void save(const std::filesystem::path& path) const;

 private:
  struct Entry {
    std::string template_id;
    std::string response;
  };
  mutable std::mutex mu_;
  std::map<std::string, Entry> entries_;
};

class ReplayProvider : public Provider {
 public:
  explicit ReplayProvider(std::shared_ptr<const Transcript> transcript)
      : transcript_(std::move(transcript)) {}

  std::string id() const override { return "replay"; }
  std::string complete(const PromptRequest& request, const std::string& key) override;

 private:
  std::shared_ptr<const Transcript> transcript_;
};

// Answers through a caller-supplied handler. Without a handler, or when the
// handler returns nullopt, the built-in defaults apply: isa_check says
// "yes", ne_check uses looks_like_named_entities, anything else is empty.
class ScriptedProvider : public Provider {
 public:
  using Handler = std::function<std::optional<std::string>(const PromptRequest&)>;

  ScriptedProvider() = default;
  explicit ScriptedProvider(Handler handler, std::string id = "mock")
      : handler_(std::move(handler)), id_(std::move(id)) {}

  std::string id() const override { return id_; }
  std::string complete(const PromptRequest& request, const std::string& key) override;

  std::size_t calls() const { return calls_.load(); }

 private:
  Handler handler_;
  std::string id_ = "mock";
  std::atomic<std::size_t> calls_{0};
};

// Offline named-entity heuristic: false when every value is numeric or
// shorter than three characters.
bool looks_like_named_entities(const std::vector<std::string>& values);

struct HttpProviderConfig {
  std::string base_url;  // e.g. https://api.openai.com/v1
  std::string model;
  std::string api_key_env = "OPENAI_API_KEY";
  std::chrono::seconds timeout{60};
};

// OpenAI-style chat-completion endpoint: POST <base_url>/chat/completions.
class HttpProvider : public Provider {
 public:
  explicit HttpProvider(HttpProviderConfig config);

  std::string id() const override { return "http:" + config_.model; }
  std::string complete(const PromptRequest& request, const std::string& key) override;

 private:
  HttpProviderConfig config_;
  std::string scheme_host_port_;
  std::string path_prefix_;
};

// Append-only record file. Each line: {"key", "template_id", "response",
// "created_at"}. Loaded fully at construction; later records win.
class ResponseCache {
 public:
  ResponseCache() = default;  // memory only
  explicit ResponseCache(std::filesystem::path path);

  std::optional<std::string> find(const std::string& key) const;
  void put(const std::string& key, TemplateId id, const std::string& response);
  std::size_t size() const;
  std::map<std::string, std::size_t> counts_by_template() const;
  void clear();

 private:
  mutable std::mutex mu_;
  std::optional<std::filesystem::path> path_;
  std::map<std::string, std::pair<std::string, std::string>> entries_;
};

struct GatewayOptions {
  std::string model = "default";
  // Applied to every request before keying when set.
  std::optional<double> temperature;
  int max_retries = 3;
  std::chrono::milliseconds initial_backoff{500};
  int max_in_flight = 4;
};

struct GatewayStats {
  std::size_t requests = 0;
  std::size_t cache_hits = 0;
  std::size_t provider_calls = 0;
  std::size_t retries = 0;
};

// Cached, retrying front door to a provider. Thread-safe.
class Gateway {
 public:
  Gateway(std::shared_ptr<Provider> provider, std::shared_ptr<ResponseCache> cache,
          GatewayOptions options = {});

  LlmResponse complete(const PromptRequest& request);

  // Every response returned (cached or fresh) is also written here.
  void set_recorder(std::shared_ptr<Transcript> recorder) { recorder_ = std::move(recorder); }
  const std::shared_ptr<Transcript>& recorder() const { return recorder_; }

  const Exemplars& exemplars() const { return *exemplars_; }
  void set_exemplars(std::shared_ptr<const Exemplars> ex) { exemplars_ = std::move(ex); }

  std::string provider_id() const { return provider_->id(); }
  const GatewayOptions& options() const { return options_; }
  GatewayStats stats() const;

 private:
  std::shared_ptr<Provider> provider_;
  std::shared_ptr<ResponseCache> cache_;
  std::shared_ptr<Transcript> recorder_;
  std::shared_ptr<const Exemplars> exemplars_;
  GatewayOptions options_;
  std::counting_semaphore<1024> in_flight_;
  mutable std::mutex stats_mu_;
  GatewayStats stats_;
};

// Runs fn(i) for i in [0, n) on up to `workers` threads. Rethrows the first
// exception after all workers stop.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

}  // namespace tabschema

#endif  // TABSCHEMA_GATEWAY_H_
