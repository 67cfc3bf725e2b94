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

#include "tabschema/gateway.h"

#include <algorithm>
#include <ctime>
#include <exception>
#include <fstream>
#include <thread>

#include "tabschema/errors.h"
#include "tabschema/text.h"

namespace tabschema {
namespace {

std::string utc_now() {
  std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::string cache_key(const PromptRequest& request, std::string_view model) {
  nlohmann::json shots = nlohmann::json::array();
  for (const auto& s : request.shots) shots.push_back({s.input, s.output});
  nlohmann::json j{{"template_id", to_string(request.template_id)},
                   {"rendered_text", request.rendered_text},
                   {"shots", shots},
                   {"temperature", request.temperature},
                   {"model", model},
                   {"attempt", request.attempt}};
  return text::sha256_hex(j.dump());
}

// --- Transcript ----------------------------------------------------------

Transcript Transcript::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read transcript " + path.string());
  Transcript t;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      t.entries_[j.at("key").get<std::string>()] =
          Entry{j.value("template_id", ""), j.at("response_text").get<std::string>()};
    } catch (const nlohmann::json::exception& e) {
      throw InputError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return t;
}

std::optional<std::string> Transcript::find(const std::string& key) const {
  std::lock_guard lock(mu_);
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second.response;
}

void Transcript::put(const std::string& key, TemplateId id, const std::string& response) {
  std::lock_guard lock(mu_);
  entries_[key] = Entry{std::string(to_string(id)), response};
}

std::size_t Transcript::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

void Transcript::save(const std::filesystem::path& path) const {
  std::lock_guard lock(mu_);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write transcript " + path.string());
  for (const auto& [key, e] : entries_) {
    nlohmann::json j{{"key", key}, {"template_id", e.template_id}, {"response_text", e.response}};
    out << j.dump() << "\n";
  }
}

std::string ReplayProvider::complete(const PromptRequest& request, const std::string& key) {
  auto hit = transcript_->find(key);
  if (!hit) throw ReplayMissError(key, std::string(to_string(request.template_id)));
  return *hit;
}

// --- Scripted provider ---------------------------------------------------

bool looks_like_named_entities(const std::vector<std::string>& values) {
  if (values.empty()) return false;
  return !std::all_of(values.begin(), values.end(), [](const std::string& v) {
    return text::is_numeric(v) || text::trim(v).size() < 3;
  });
}

std::string ScriptedProvider::complete(const PromptRequest& request, const std::string&) {
  ++calls_;
  if (handler_) {
    if (auto answer = handler_(request)) return *answer;
  }
  switch (request.template_id) {
    case TemplateId::kIsaCheck:
      return "yes";
    case TemplateId::kNeCheck: {
      std::vector<std::string> values;
      if (request.vars.contains("values")) {
        values = request.vars["values"].get<std::vector<std::string>>();
      }
      return looks_like_named_entities(values) ? "yes" : "no";
    }
    default:
      return "";
  }
}

// --- Cache ---------------------------------------------------------------

ResponseCache::ResponseCache(std::filesystem::path path) : path_(std::move(path)) {
  std::ifstream in(*path_);
  if (!in) return;  // created on first put
  std::string line;
  while (std::getline(in, line)) {
    if (text::trim(line).empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      entries_[j.at("key").get<std::string>()] = {j.value("template_id", ""),
                                                  j.at("response").get<std::string>()};
    } catch (const nlohmann::json::exception&) {
      // A torn final line from an interrupted write; earlier records stand.
    }
  }
}

std::optional<std::string> ResponseCache::find(const std::string& key) const {
  std::lock_guard lock(mu_);
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second.second;
}

void ResponseCache::put(const std::string& key, TemplateId id, const std::string& response) {
  std::lock_guard lock(mu_);
  entries_[key] = {std::string(to_string(id)), response};
  if (!path_) return;
  std::ofstream out(*path_, std::ios::binary | std::ios::app);
  if (!out) throw InputError("cannot append to cache " + path_->string());
  nlohmann::json j{{"key", key},
                   {"template_id", to_string(id)},
                   {"response", response},
                   {"created_at", utc_now()}};
  out << j.dump() << "\n";
  out.flush();
}

std::size_t ResponseCache::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

std::map<std::string, std::size_t> ResponseCache::counts_by_template() const {
  std::lock_guard lock(mu_);
  std::map<std::string, std::size_t> out;
  for (const auto& [_, v] : entries_) ++out[v.first];
  return out;
}

void ResponseCache::clear() {
  std::lock_guard lock(mu_);
  entries_.clear();
  if (path_) std::filesystem::remove(*path_);
}

// --- Gateway -------------------------------------------------------------

Gateway::Gateway(std::shared_ptr<Provider> provider, std::shared_ptr<ResponseCache> cache,
                 GatewayOptions options)
    : provider_(std::move(provider)),
      cache_(cache ? std::move(cache) : std::make_shared<ResponseCache>()),
      exemplars_(std::shared_ptr<const Exemplars>(&Exemplars::defaults(),
                                                  [](const Exemplars*) {})),
      options_(std::move(options)),
      in_flight_(std::clamp(options_.max_in_flight, 1, 1024)) {}

LlmResponse Gateway::complete(const PromptRequest& original) {
  if (original.rendered_text.empty()) throw PreconditionError("empty prompt");
  PromptRequest request = original;
  if (options_.temperature) request.temperature = *options_.temperature;
  const std::string key = cache_key(request, options_.model);
  {
    std::lock_guard lock(stats_mu_);
    ++stats_.requests;
  }
  if (auto hit = cache_->find(key)) {
    {
      std::lock_guard lock(stats_mu_);
      ++stats_.cache_hits;
    }
    if (recorder_) recorder_->put(key, request.template_id, *hit);
    return LlmResponse{*hit, true, provider_->id()};
  }

  std::string text;
  for (int attempt = 0;; ++attempt) {
    try {
      in_flight_.acquire();
      struct Release {
        std::counting_semaphore<1024>& s;
        ~Release() { s.release(); }
      } release{in_flight_};
      {
        std::lock_guard lock(stats_mu_);
        ++stats_.provider_calls;
      }
      text = provider_->complete(request, key);
      break;
    } catch (const TransportError&) {
      if (attempt >= options_.max_retries) throw;
      {
        std::lock_guard lock(stats_mu_);
        ++stats_.retries;
      }
      std::this_thread::sleep_for(options_.initial_backoff * (1 << attempt));
    }
  }
  cache_->put(key, request.template_id, text);
  if (recorder_) recorder_->put(key, request.template_id, text);
  return LlmResponse{std::move(text), false, provider_->id()};
}

GatewayStats Gateway::stats() const {
  std::lock_guard lock(stats_mu_);
  return stats_;
}

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
  if (n == 0) return;
  std::size_t threads = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, workers)));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex err_mu;
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        {
          std::lock_guard lock(err_mu);
          if (first_error) return;
        }
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(err_mu);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace tabschema
