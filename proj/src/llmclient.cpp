#include "apet/llmclient.hpp"

#include <cstdlib>
#include <fstream>
#include <json.hpp>

#include "apet/digest.hpp"

namespace apet::llm {

using ojson = nlohmann::ordered_json;

void CompletionParams::validate() const {
  if (!(temperature >= 0.0)) throw InvalidRequest("temperature must be >= 0");
  if (!(top_p > 0.0 && top_p <= 1.0)) throw InvalidRequest("top_p must be in (0, 1]");
  if (max_tokens && *max_tokens <= 0) throw InvalidRequest("max_tokens must be positive");
  if (model.empty()) throw InvalidRequest("model identifier is empty");
}

std::string request_digest(std::span<const Message> messages, const CompletionParams& params) {
  ojson key;
  key["model"] = params.model;
  key["temperature"] = params.temperature;
  key["top_p"] = params.top_p;
  key["max_tokens"] = params.max_tokens ? ojson(*params.max_tokens) : ojson(nullptr);
  ojson msgs = ojson::array();
  for (const auto& m : messages) msgs.push_back(ojson::array({to_string(m.role), m.content}));
  key["messages"] = std::move(msgs);
  return sha256_hex(key.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace));
}

CompletionResult ChatProvider::complete(std::span<const Message> messages,
                                        const CompletionParams& params) {
  if (messages.empty()) throw InvalidRequest("message list is empty");
  if (messages.front().role == Role::Assistant)
    throw InvalidRequest("first message must be a system or user message");
  params.validate();
  return do_complete(messages, params);
}

std::vector<ScriptEntry> read_script_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open script file: " + path);
  std::vector<ScriptEntry> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      out.push_back({j.at("digest").get<std::string>(), j.at("content").get<std::string>()});
    } catch (const nlohmann::json::exception& e) {
      throw Error(path + ":" + std::to_string(lineno) + ": bad script record: " + e.what());
    }
  }
  return out;
}

std::string encode_script_entry(const ScriptEntry& entry) {
  ojson j;
  j["digest"] = entry.digest;
  j["content"] = entry.content;
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::strict);
}

ReplayProvider::ReplayProvider(std::vector<ScriptEntry> entries) {
  for (auto& e : entries) add(std::move(e.digest), std::move(e.content));
}

ReplayProvider ReplayProvider::from_file(const std::string& path) {
  return ReplayProvider(read_script_file(path));
}

void ReplayProvider::add(std::string digest, std::string content) {
  script_.try_emplace(std::move(digest), std::move(content));
}

CompletionResult ReplayProvider::do_complete(std::span<const Message> messages,
                                             const CompletionParams& params) {
  const auto digest = request_digest(messages, params);
  const auto it = script_.find(digest);
  if (it == script_.end()) throw ReplayMiss(digest);
  return {it->second, id(), false};
}

CachedProvider::CachedProvider(std::shared_ptr<ChatProvider> backend, std::string path)
    : backend_(std::move(backend)), path_(std::move(path)) {
  if (!path_.empty() && std::ifstream(path_).good())
    for (auto& e : read_script_file(path_)) entries_.try_emplace(std::move(e.digest), std::move(e.content));
}

std::size_t CachedProvider::backend_calls() const {
  std::lock_guard lock(mu_);
  return backend_calls_;
}

std::size_t CachedProvider::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

CompletionResult CachedProvider::do_complete(std::span<const Message> messages,
                                             const CompletionParams& params) {
  const auto digest = request_digest(messages, params);
  std::promise<std::string> promise;
  {
    std::unique_lock lock(mu_);
    if (auto it = entries_.find(digest); it != entries_.end()) return {it->second, id(), true};
    if (auto it = in_flight_.find(digest); it != in_flight_.end()) {
      auto pending = it->second;
      lock.unlock();
      return {pending.get(), id(), true};
    }
    in_flight_.emplace(digest, promise.get_future().share());
    ++backend_calls_;
  }

  CompletionResult result;
  try {
    result = backend_->complete(messages, params);
  } catch (...) {
    std::lock_guard lock(mu_);
    promise.set_exception(std::current_exception());
    in_flight_.erase(digest);
    throw;
  }

  std::lock_guard lock(mu_);
  if (!path_.empty()) {
    std::ofstream out(path_, std::ios::binary | std::ios::app);
    if (!out) throw Error("cannot append to cache file: " + path_);
    out << encode_script_entry({digest, result.content}) << '\n';
  }
  entries_.emplace(digest, result.content);
  promise.set_value(result.content);
  in_flight_.erase(digest);
  return {result.content, id(), false};
}

bool is_retryable_status(int status) { return status == 429 || (status >= 500 && status <= 599); }

HttpResponse with_retries(const std::function<HttpResponse()>& attempt, const RetryPolicy& policy,
                          const std::function<void(std::chrono::milliseconds)>& sleep,
                          std::mt19937_64& rng) {
  std::string last_error;
  int last_status = 0;
  for (int i = 0; i < policy.max_attempts; ++i) {
    if (i > 0) {
      // Full jitter: uniform in [0, min(max_delay, base * 2^(i-1))].
      const auto cap = std::min<long long>(policy.max_delay.count(),
                                           policy.base_delay.count() * (1LL << std::min(i - 1, 30)));
      std::uniform_int_distribution<long long> dist(0, cap);
      sleep(std::chrono::milliseconds(dist(rng)));
    }
    try {
      auto response = attempt();
      if (!is_retryable_status(response.status)) return response;
      last_status = response.status;
      last_error = "HTTP " + std::to_string(response.status);
    } catch (const TransportError& e) {
      last_status = 0;
      last_error = e.what();
    }
  }
  const auto attempts = std::to_string(policy.max_attempts);
  if (last_status == 429) throw RateLimited("rate limited after " + attempts + " attempts");
  throw TransportError("request failed after " + attempts + " attempts: " + last_error);
}

HttpConfig HttpConfig::from_environment() {
  HttpConfig config;
  if (const char* key = std::getenv("APET_API_KEY")) config.api_key = key;
  if (const char* url = std::getenv("APET_BASE_URL"); url && *url) config.base_url = url;
  return config;
}

std::string build_request_body(std::span<const Message> messages, const CompletionParams& params) {
  ojson body;
  body["model"] = params.model;
  ojson msgs = ojson::array();
  for (const auto& m : messages) {
    ojson item;
    item["role"] = to_string(m.role);
    item["content"] = m.content;
    msgs.push_back(std::move(item));
  }
  body["messages"] = std::move(msgs);
  body["temperature"] = params.temperature;
  body["top_p"] = params.top_p;
  if (params.max_tokens) body["max_tokens"] = *params.max_tokens;
  return body.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

std::string parse_response_body(const std::string& body) {
  try {
    const auto j = nlohmann::json::parse(body);
    const auto& content = j.at("choices").at(0).at("message").at("content");
    if (content.is_null()) return {};
    return content.get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw TransportError(std::string("unexpected completion payload: ") + e.what());
  }
}

}  // namespace apet::llm
