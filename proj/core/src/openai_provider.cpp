#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <json.hpp>

#include "fuzzymatch/errors.hpp"
#include "fuzzymatch/provider.hpp"

namespace fuzzymatch::llm {

namespace {

struct Endpoint {
  std::string origin; // scheme://host[:port]
  std::string path_prefix;
};

Endpoint split_base_url(const std::string &url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos)
    throw ConfigError("endpoint must include a scheme: " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  Endpoint ep;
  if (path_start == std::string::npos) {
    ep.origin = url;
  } else {
    ep.origin = url.substr(0, path_start);
    ep.path_prefix = url.substr(path_start);
    while (!ep.path_prefix.empty() && ep.path_prefix.back() == '/')
      ep.path_prefix.pop_back();
  }
  return ep;
}

} // namespace

OpenAiChatProvider::OpenAiChatProvider(OpenAiOptions options)
    : options_(std::move(options)) {
  if (options_.api_key.empty())
    throw ConfigError("API key is empty");
  split_base_url(options_.base_url);
}

std::string OpenAiChatProvider::build_request_body(const ChatRequest &request) {
  nlohmann::json messages = nlohmann::json::array();
  if (!request.system.empty())
    messages.push_back({{"role", "system"}, {"content", request.system}});
  messages.push_back({{"role", "user"}, {"content", request.user}});
  nlohmann::json body = {
      {"model", request.model_id},
      {"temperature", request.temperature},
      {"max_tokens", request.max_output_tokens},
      {"messages", std::move(messages)},
  };
  return body.dump();
}

std::string OpenAiChatProvider::parse_response_body(std::string_view body) {
  try {
    const auto json = nlohmann::json::parse(body);
    return json.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception &e) {
    throw ProviderError(std::string("malformed chat-completion response: ") +
                            e.what(),
                        /*retryable=*/false);
  }
}

std::string OpenAiChatProvider::complete(const ChatRequest &request) {
  const Endpoint ep = split_base_url(options_.base_url);
  // httplib clients are not shareable across threads; one per call.
  httplib::Client client(ep.origin);
  client.set_connection_timeout(options_.timeout_seconds, 0);
  client.set_read_timeout(options_.timeout_seconds, 0);
  client.set_write_timeout(options_.timeout_seconds, 0);
  client.enable_server_certificate_verification(true);

  const httplib::Headers headers = {
      {"Authorization", "Bearer " + options_.api_key},
  };
  auto res = client.Post(ep.path_prefix + "/v1/chat/completions", headers,
                         build_request_body(request), "application/json");
  if (!res)
    throw ProviderError("chat-completion request failed: " +
                        httplib::to_string(res.error()));
  if (res->status != 200) {
    const bool retryable = res->status == 429 || res->status >= 500;
    throw ProviderError("chat-completion HTTP status " +
                            std::to_string(res->status),
                        retryable);
  }
  return parse_response_body(res->body);
}

} // namespace fuzzymatch::llm
