#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <thread>

#include "apet/llmclient.hpp"

namespace apet::llm {

namespace {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string prefix;  // path component, no trailing slash
};

SplitUrl split_base_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw InvalidRequest("base URL lacks a scheme: " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  SplitUrl out;
  out.origin = url.substr(0, path_start);
  if (path_start != std::string::npos) out.prefix = url.substr(path_start);
  while (!out.prefix.empty() && out.prefix.back() == '/') out.prefix.pop_back();
  return out;
}

}  // namespace

HttpProvider::HttpProvider(HttpConfig config)
    : config_(std::move(config)), rng_(std::random_device{}()) {}

HttpProvider::~HttpProvider() = default;

CompletionResult HttpProvider::do_complete(std::span<const Message> messages,
                                           const CompletionParams& params) {
  const auto url = split_base_url(config_.base_url);
  const auto path = url.prefix + config_.completion_path;
  const auto body = build_request_body(messages, params);

  httplib::Client client(url.origin);
  client.set_connection_timeout(config_.timeout);
  client.set_read_timeout(config_.timeout);
  client.set_write_timeout(config_.timeout);
  httplib::Headers headers;
  if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);

  std::mt19937_64 rng;
  {
    std::lock_guard lock(rng_mu_);
    rng.seed(rng_());
  }
  auto attempt = [&]() -> HttpResponse {
    auto res = client.Post(path, headers, body, "application/json");
    if (!res) throw TransportError("HTTP transport error: " + httplib::to_string(res.error()));
    return {res->status, res->body};
  };
  auto sleep = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
  const auto response = with_retries(attempt, config_.retry, sleep, rng);
  if (response.status < 200 || response.status >= 300)
    throw TransportError("HTTP " + std::to_string(response.status) + ": " +
                         response.body.substr(0, 300));
  return {parse_response_body(response.body), id(), false};
}

}  // namespace apet::llm
