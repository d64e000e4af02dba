#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <unordered_map>

namespace fuzzymatch::llm {

struct ChatRequest {
  std::string model_id;
  double temperature = 0.2;
  std::string system; // may be empty
  std::string user;
  int max_output_tokens = 8;

  // The complete rendered prompt (system paragraph + user message).
  std::string prompt_text() const;
};

// Returns the raw model reply or throws ProviderError. Implementations must be
// callable from several threads at once.
class ChatProvider {
public:
  virtual ~ChatProvider() = default;
  virtual std::string complete(const ChatRequest &request) = 0;
  virtual std::string name() const = 0;
  // True when the reply is a pure function of the request.
  virtual bool deterministic() const { return false; }
};

// Deterministic provider backed by a pure function of the prompt text.
class MockProvider : public ChatProvider {
public:
  using ReplyFn = std::function<std::string(std::string_view prompt)>;

  explicit MockProvider(ReplyFn reply) : reply_(std::move(reply)) {}

  // Replies with a fixed-point decimal derived from SHA-256 of the prompt.
  static MockProvider hashing();
  static MockProvider constant(std::string reply);

  std::string complete(const ChatRequest &request) override;
  std::string name() const override { return "mock"; }
  bool deterministic() const override { return true; }

private:
  ReplyFn reply_;
};

// Replays recorded replies keyed by SHA-256 (hex) of the full prompt text.
// Fixture format: JSON lines of {"prompt_sha256": ..., "reply": ...}.
class ReplayProvider : public ChatProvider {
public:
  explicit ReplayProvider(std::unordered_map<std::string, std::string> replies)
      : replies_(std::move(replies)) {}

  static ReplayProvider load(const std::string &path);

  std::string complete(const ChatRequest &request) override;
  std::string name() const override { return "replay"; }
  bool deterministic() const override { return true; }

private:
  std::unordered_map<std::string, std::string> replies_;
};

struct OpenAiOptions {
  std::string base_url = "https://api.openai.com";
  std::string api_key;
  int timeout_seconds = 60;
};

// Chat-completion client speaking the OpenAI HTTP JSON protocol.
class OpenAiChatProvider : public ChatProvider {
public:
  explicit OpenAiChatProvider(OpenAiOptions options);

  std::string complete(const ChatRequest &request) override;
  std::string name() const override { return "openai"; }

  // Request body for `request`; exposed for tests.
  static std::string build_request_body(const ChatRequest &request);
  // Extracts choices[0].message.content; throws ProviderError otherwise.
  static std::string parse_response_body(std::string_view body);

private:
  OpenAiOptions options_;
};

} // namespace fuzzymatch::llm
