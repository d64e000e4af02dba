#include <gtest/gtest.h>

#include <thread>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <json.hpp>

#include "fuzzymatch/errors.hpp"
#include "fuzzymatch/llm.hpp"
#include "fuzzymatch/provider.hpp"

using namespace fuzzymatch::llm;
using nlohmann::json;

TEST(OpenAiProvider, RequestBody) {
  ChatRequest r{"gpt-4-0613", 0.2, "sys", "user text", 8};
  const auto body = json::parse(OpenAiChatProvider::build_request_body(r));
  EXPECT_EQ(body["model"], "gpt-4-0613");
  EXPECT_EQ(body["temperature"], 0.2);
  EXPECT_EQ(body["max_tokens"], 8);
  ASSERT_EQ(body["messages"].size(), 2u);
  EXPECT_EQ(body["messages"][0]["role"], "system");
  EXPECT_EQ(body["messages"][1]["content"], "user text");

  r.system.clear();
  EXPECT_EQ(json::parse(OpenAiChatProvider::build_request_body(r))["messages"].size(), 1u);
}

TEST(OpenAiProvider, ResponseParsing) {
  EXPECT_EQ(OpenAiChatProvider::parse_response_body(
                R"({"choices":[{"message":{"role":"assistant","content":"0.9"}}]})"),
            "0.9");
  EXPECT_THROW(OpenAiChatProvider::parse_response_body("{}"), fuzzymatch::ProviderError);
  EXPECT_THROW(OpenAiChatProvider::parse_response_body("not json"), fuzzymatch::ProviderError);
}

class LocalServer : public ::testing::Test {
protected:
  void SetUp() override {
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  void TearDown() override {
    server_.stop();
    thread_.join();
  }
  OpenAiOptions options() const {
    return {"http://127.0.0.1:" + std::to_string(port_), "test-key", 5};
  }

  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

TEST_F(LocalServer, SendsBearerKeyAndParsesReply) {
  std::string auth;
  server_.Post("/v1/chat/completions", [&](const httplib::Request &req, httplib::Response &res) {
    auth = req.get_header_value("Authorization");
    res.set_content(R"({"choices":[{"message":{"content":"0.8"}}]})", "application/json");
  });
  OpenAiChatProvider p(options());
  EXPECT_EQ(p.complete({"m", 0.2, "", "hello", 8}), "0.8");
  EXPECT_EQ(auth, "Bearer test-key");
}

TEST_F(LocalServer, RateLimitIsRetried) {
  int hits = 0;
  server_.Post("/v1/chat/completions", [&](const httplib::Request &, httplib::Response &res) {
    if (++hits < 3) {
      res.status = 429;
      return;
    }
    res.set_content(R"({"choices":[{"message":{"content":"0.3"}}]})", "application/json");
  });
  OpenAiChatProvider p(options());
  LlmConfig cfg;
  cfg.initial_backoff_ms = 1;
  EXPECT_EQ(score_pair(p, cfg, PromptTemplate::plain(), {"a", "b"}).score(), 0.3);
  EXPECT_EQ(hits, 3);
}

TEST_F(LocalServer, ClientErrorIsNotRetried) {
  int hits = 0;
  server_.Post("/v1/chat/completions", [&](const httplib::Request &, httplib::Response &res) {
    ++hits;
    res.status = 401;
  });
  OpenAiChatProvider p(options());
  LlmConfig cfg;
  cfg.initial_backoff_ms = 1;
  EXPECT_THROW(score_pair(p, cfg, PromptTemplate::plain(), {"a", "b"}),
               fuzzymatch::TransportError);
  EXPECT_EQ(hits, 1);
}
