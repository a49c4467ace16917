#pragma once
// Chat-completion providers: live HTTP, deterministic replay, and a
// persistent cache that wraps either.

#include <chrono>
#include <functional>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "apet/core.hpp"

namespace apet::llm {

class ProviderError : public Error {
 public:
  using Error::Error;
};

class TransportError : public ProviderError {
 public:
  using ProviderError::ProviderError;
};

class RateLimited : public ProviderError {
 public:
  using ProviderError::ProviderError;
};

class ReplayMiss : public ProviderError {
 public:
  explicit ReplayMiss(const std::string& digest)
      : ProviderError("no replay script for request " + digest), digest_(digest) {}
  const std::string& digest() const { return digest_; }

 private:
  std::string digest_;
};

class InvalidRequest : public ProviderError {
 public:
  using ProviderError::ProviderError;
};

struct CompletionParams {
  std::string model = "gpt-4";
  double temperature = 0.0;
  double top_p = 1.0;
  std::optional<int> max_tokens;

  // Throws InvalidRequest if temperature < 0, top_p outside (0, 1] or
  // max_tokens is not positive.
  void validate() const;
};

struct CompletionResult {
  std::string content;
  std::string provider_id;
  bool cached = false;
};

// Stable hex SHA-256 over model, sampling parameters and the ordered
// role/content pairs.
std::string request_digest(std::span<const Message> messages, const CompletionParams& params);

class ChatProvider {
 public:
  virtual ~ChatProvider() = default;

  // Must be safe to call concurrently.
  CompletionResult complete(std::span<const Message> messages, const CompletionParams& params);

  virtual std::string id() const = 0;

 protected:
  virtual CompletionResult do_complete(std::span<const Message> messages,
                                       const CompletionParams& params) = 0;
};

// One {digest, content} record per line; shared by replay scripts and caches.
struct ScriptEntry {
  std::string digest;
  std::string content;
};
std::vector<ScriptEntry> read_script_file(const std::string& path);
std::string encode_script_entry(const ScriptEntry& entry);

class ReplayProvider final : public ChatProvider {
 public:
  ReplayProvider() = default;
  explicit ReplayProvider(std::vector<ScriptEntry> entries);
  static ReplayProvider from_file(const std::string& path);

  void add(std::string digest, std::string content);
  std::size_t size() const { return script_.size(); }
  std::string id() const override { return "replay"; }

 protected:
  CompletionResult do_complete(std::span<const Message> messages,
                               const CompletionParams& params) override;

 private:
  std::unordered_map<std::string, std::string> script_;  // first entry per digest wins
};

// Write-through disk cache. Concurrent identical requests reach the backend
// once; later callers wait for that result and see cached = true.
class CachedProvider final : public ChatProvider {
 public:
  // An empty path keeps the cache in memory only.
  CachedProvider(std::shared_ptr<ChatProvider> backend, std::string path);

  std::string id() const override { return "cache(" + backend_->id() + ")"; }
  std::size_t backend_calls() const;
  std::size_t size() const;

 protected:
  CompletionResult do_complete(std::span<const Message> messages,
                               const CompletionParams& params) override;

 private:
  std::shared_ptr<ChatProvider> backend_;
  std::string path_;
  mutable std::mutex mu_;
  std::unordered_map<std::string, std::string> entries_;
  std::map<std::string, std::shared_future<std::string>> in_flight_;
  std::size_t backend_calls_ = 0;
};

// Outcome of one HTTP attempt; transport failures are reported by throwing
// TransportError from the attempt function.
struct HttpResponse {
  int status = 0;
  std::string body;
};

struct RetryPolicy {
  int max_attempts = 5;
  std::chrono::milliseconds base_delay{500};
  std::chrono::milliseconds max_delay{30000};
};

bool is_retryable_status(int status);

// Repeats attempt() with exponential backoff and full jitter on transport
// errors and HTTP 429/5xx. The attempt callable is invoked with the same
// request every time; only the repetition changes.
HttpResponse with_retries(const std::function<HttpResponse()>& attempt, const RetryPolicy& policy,
                          const std::function<void(std::chrono::milliseconds)>& sleep,
                          std::mt19937_64& rng);

struct HttpConfig {
  std::string base_url = "https://api.openai.com/v1";
  std::string completion_path = "/chat/completions";
  std::string api_key;
  std::chrono::seconds timeout{120};
  RetryPolicy retry;

  // Reads APET_API_KEY and APET_BASE_URL, keeping defaults for unset values.
  static HttpConfig from_environment();
};

// Request body for the chat-completions wire protocol.
std::string build_request_body(std::span<const Message> messages, const CompletionParams& params);
// Extracts choices[0].message.content; throws TransportError on bad payloads.
std::string parse_response_body(const std::string& body);

class HttpProvider final : public ChatProvider {
 public:
  explicit HttpProvider(HttpConfig config);
  ~HttpProvider() override;

  std::string id() const override { return "http:" + config_.base_url; }

 protected:
  CompletionResult do_complete(std::span<const Message> messages,
                               const CompletionParams& params) override;

 private:
  HttpConfig config_;
  std::mutex rng_mu_;
  std::mt19937_64 rng_;
};

}  // namespace apet::llm
